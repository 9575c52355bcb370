#pragma once

// Ψ: the L×L grid of diagonal n×n blocks with U·Ψ·Uᴴ = (HᵀH).*(GᵀG) for
// column-stacked circulant G, H.

#include <Eigen/Dense>

#include <vector>

#include "tensordict/filter_bank.hpp"

namespace tensordict {

class PsiBlocks {
 public:
  PsiBlocks(Index n, Index count);

  static PsiBlocks identity(Index n, Index count);

  Index length() const { return n_; }
  Index count() const { return count_; }

  /// Diagonal of block (row j, column l).
  Eigen::VectorXcd& block(Index j, Index l) { return blocks_[j * count_ + l]; }
  const Eigen::VectorXcd& block(Index j, Index l) const { return blocks_[j * count_ + l]; }

  /// L×L matrix of frequency k: entry (j, l) = block(j, l)[k].
  Eigen::MatrixXcd frequency(Index k) const;
  void set_frequency(Index k, const Eigen::MatrixXcd& m);

  double max_abs() const;
  Eigen::MatrixXcd dense() const;
  /// 𝐔·Ψ·𝐔ᴴ with 𝐔 = Blkdiag(U, ..., U); real whenever Ψ comes from real filters.
  Eigen::MatrixXd conjugated_dense() const;

 private:
  Index n_;
  Index count_;
  std::vector<Eigen::VectorXcd> blocks_;
};

/// blk(j, l) = FFT(γ(g_j, g_l) .* γ(h_j, h_l)).
PsiBlocks psi_build(const FilterBank& g, const FilterBank& h);

/// Moore–Penrose pseudoinverse. Uses recursive 2×2 block inversion through
/// Schur complements; when a pivot falls below cutoff·max|Ψ| the whole
/// inverse is recomputed per frequency by SVD, discarding singular values
/// below cutoff·σ_max.
PsiBlocks psi_pinv(const PsiBlocks& psi, double cutoff = 1e-8);

}  // namespace tensordict

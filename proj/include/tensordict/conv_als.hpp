#pragma once

// Convolutional tensor decomposition: ALS over column-stacked circulant
// factors with closed-form per-mode filter updates.

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "tensordict/cumulant.hpp"
#include "tensordict/filter_bank.hpp"
#include "tensordict/psi.hpp"
#include "tensordict/random.hpp"

namespace tensordict::conv {

using cumulant::UnfoldedCumulant;

/// Diagonal of Λ, one weight per shifted filter (length nL).
using WeightDiag = Eigen::VectorXd;

struct AlsConfig {
  long max_iters = 500;
  /// Stop once max_l ‖f_l^{t+1} − f_l^t‖ over all three modes drops below tol.
  double tol = 1e-8;
  /// Relative threshold for Ψ† and for treating a column of M as zero.
  double pinv_cutoff = 1e-8;
  /// Independent initializations; the one with the lowest final cumulant
  /// reconstruction error is returned.
  int restarts = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

/// M = C3·(H⊙G)·(𝐔Ψ†𝐔ᴴ), the unconstrained least-squares factor for the
/// mode paired with G (second index) and H (third index).
Eigen::MatrixXd compute_M(const UnfoldedCumulant& c3, const FilterBank& g, const FilterBank& h,
                          double pinv_cutoff = 1e-8);

/// Closest unit-norm circulant filter per block of M. Columns with norm at or
/// below cutoff·max column norm are skipped. A block with nothing left keeps
/// the filter from `previous` if given, otherwise throws DegenerateBlockError.
FilterBank filter_update(const Eigen::MatrixXd& m, Index count, const FilterBank* previous = nullptr,
                         double cutoff = 1e-8);

/// λ(i) = ‖M_i‖.
WeightDiag lambda_update(const Eigen::MatrixXd& m);

/// ‖C3 − F·Λ·(H⊙G)ᵀ‖_F / ‖C3‖_F (absolute when C3 = 0).
double cumulant_recon_error(const UnfoldedCumulant& c3, const FilterBank& f, const WeightDiag& lambda,
                            const FilterBank& g, const FilterBank& h);

struct AlsTracePoint {
  long iter;
  double recon_error;
  double filter_change;
};

struct AlsResult {
  FilterBank f, g, h;
  WeightDiag lambda;
  std::vector<AlsTracePoint> trace;
  long iterations;
  bool converged;
};

/// Runs cfg.restarts independent ALS runs from Gaussian initializations and
/// keeps the best by final reconstruction error. F is the reported bank.
AlsResult ct_als(const UnfoldedCumulant& c3, Index count, const AlsConfig& cfg, Rng& rng);

/// Single run from explicit initial factors.
AlsResult ct_als_from(const UnfoldedCumulant& c3, FilterBank f, FilterBank g, FilterBank h,
                      const AlsConfig& cfg);

/// Mean ℓ2 distance after minimizing over filter permutations, cyclic shifts
/// and (optionally) per-filter sign.
double filter_recovery_error(const FilterBank& est, const FilterBank& truth, bool allow_sign = true);

}  // namespace tensordict::conv

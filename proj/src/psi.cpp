#include "tensordict/psi.hpp"

#include <cmath>
#include <string>

#include "tensordict/circulant.hpp"

namespace tensordict {

PsiBlocks::PsiBlocks(Index n, Index count)
    : n_(n), count_(count), blocks_(static_cast<std::size_t>(count * count),
                                    Eigen::VectorXcd::Zero(n)) {
  if (n < 1 || count < 1) throw ShapeError("PsiBlocks needs n >= 1 and L >= 1");
}

PsiBlocks PsiBlocks::identity(Index n, Index count) {
  PsiBlocks out(n, count);
  for (Index j = 0; j < count; ++j) out.block(j, j).setOnes();
  return out;
}

Eigen::MatrixXcd PsiBlocks::frequency(Index k) const {
  Eigen::MatrixXcd m(count_, count_);
  for (Index j = 0; j < count_; ++j)
    for (Index l = 0; l < count_; ++l) m(j, l) = block(j, l)[k];
  return m;
}

void PsiBlocks::set_frequency(Index k, const Eigen::MatrixXcd& m) {
  for (Index j = 0; j < count_; ++j)
    for (Index l = 0; l < count_; ++l) block(j, l)[k] = m(j, l);
}

double PsiBlocks::max_abs() const {
  double best = 0.0;
  for (const auto& b : blocks_) best = std::max(best, b.cwiseAbs().maxCoeff());
  return best;
}

Eigen::MatrixXcd PsiBlocks::dense() const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n_ * count_, n_ * count_);
  for (Index j = 0; j < count_; ++j)
    for (Index l = 0; l < count_; ++l)
      out.block(j * n_, l * n_, n_, n_).diagonal() = block(j, l);
  return out;
}

Eigen::MatrixXd PsiBlocks::conjugated_dense() const {
  // U·Diag(d)·Uᴴ is the circulant generated by IFFT(d).
  Eigen::MatrixXd out(n_ * count_, n_ * count_);
  for (Index j = 0; j < count_; ++j)
    for (Index l = 0; l < count_; ++l) {
      const Eigen::VectorXd c = circulant::ifft(block(j, l)).real();
      out.block(j * n_, l * n_, n_, n_) = circulant::circulant_dense(c);
    }
  return out;
}

PsiBlocks psi_build(const FilterBank& g, const FilterBank& h) {
  if (g.length() != h.length() || g.count() != h.count())
    throw ShapeError("psi_build: filter banks differ in shape");
  const Index n = g.length();
  const Index count = g.count();
  std::vector<Eigen::VectorXcd> gf(count), hf(count);
  for (Index l = 0; l < count; ++l) {
    gf[l] = circulant::fft(g.filter(l));
    hf[l] = circulant::fft(h.filter(l));
  }
  PsiBlocks psi(n, count);
  for (Index j = 0; j < count; ++j)
    for (Index l = 0; l < count; ++l) {
      // FFT(γ(a, b)) = conj(FFT a) .* FFT b
      const Eigen::VectorXd gg = circulant::ifft(gf[j].conjugate().cwiseProduct(gf[l])).real();
      const Eigen::VectorXd hh = circulant::ifft(hf[j].conjugate().cwiseProduct(hf[l])).real();
      psi.block(j, l) = circulant::fft(Eigen::VectorXd(gg.cwiseProduct(hh)));
    }
  return psi;
}

namespace {

// Rectangular grid of diagonal blocks, used for the recursive inversion.
struct Grid {
  Index rows = 0, cols = 0, n = 0;
  std::vector<Eigen::VectorXcd> cells;

  Grid(Index r, Index c, Index len)
      : rows(r), cols(c), n(len), cells(static_cast<std::size_t>(r * c), Eigen::VectorXcd::Zero(len)) {}

  Eigen::VectorXcd& at(Index i, Index j) { return cells[i * cols + j]; }
  const Eigen::VectorXcd& at(Index i, Index j) const { return cells[i * cols + j]; }

  Grid sub(Index r0, Index c0, Index r, Index c) const {
    Grid out(r, c, n);
    for (Index i = 0; i < r; ++i)
      for (Index j = 0; j < c; ++j) out.at(i, j) = at(r0 + i, c0 + j);
    return out;
  }

  void place(Index r0, Index c0, const Grid& g) {
    for (Index i = 0; i < g.rows; ++i)
      for (Index j = 0; j < g.cols; ++j) at(r0 + i, c0 + j) = g.at(i, j);
  }
};

Grid operator*(const Grid& a, const Grid& b) {
  Grid out(a.rows, b.cols, a.n);
  for (Index i = 0; i < a.rows; ++i)
    for (Index j = 0; j < b.cols; ++j)
      for (Index k = 0; k < a.cols; ++k) out.at(i, j) += a.at(i, k).cwiseProduct(b.at(k, j));
  return out;
}

Grid operator+(const Grid& a, const Grid& b) {
  Grid out = a;
  for (std::size_t i = 0; i < out.cells.size(); ++i) out.cells[i] += b.cells[i];
  return out;
}

Grid operator-(const Grid& a, const Grid& b) {
  Grid out = a;
  for (std::size_t i = 0; i < out.cells.size(); ++i) out.cells[i] -= b.cells[i];
  return out;
}

Grid operator-(const Grid& a) {
  Grid out = a;
  for (auto& c : out.cells) c = -c;
  return out;
}

struct SingularPivot {};

Grid block_inverse(const Grid& a, double threshold) {
  if (a.rows == 1) {
    Grid out(1, 1, a.n);
    for (Index k = 0; k < a.n; ++k) {
      const std::complex<double> p = a.at(0, 0)[k];
      if (!(std::abs(p) > threshold)) throw SingularPivot{};
      out.at(0, 0)[k] = 1.0 / p;
    }
    return out;
  }
  const Index h = a.rows / 2;
  const Index rest = a.rows - h;
  const Grid j = a.sub(0, 0, h, h);
  const Grid o = a.sub(0, h, h, rest);
  const Grid r = a.sub(h, 0, rest, h);
  const Grid d = a.sub(h, h, rest, rest);

  const Grid ji = block_inverse(j, threshold);
  const Grid ji_o = ji * o;
  const Grid r_ji = r * ji;
  const Grid si = block_inverse(d - r * ji_o, threshold);
  const Grid ji_o_si = ji_o * si;

  Grid out(a.rows, a.cols, a.n);
  out.place(0, 0, ji + ji_o_si * r_ji);
  out.place(0, h, -ji_o_si);
  out.place(h, 0, -(si * r_ji));
  out.place(h, h, si);
  return out;
}

PsiBlocks svd_pinv(const PsiBlocks& psi, double cutoff) {
  const Index n = psi.length();
  std::vector<Eigen::JacobiSVD<Eigen::MatrixXcd>> svds;
  svds.reserve(static_cast<std::size_t>(n));
  double sigma_max = 0.0;
  for (Index k = 0; k < n; ++k) {
    svds.emplace_back(psi.frequency(k), Eigen::ComputeFullU | Eigen::ComputeFullV);
    sigma_max = std::max(sigma_max, svds.back().singularValues()(0));
  }
  const double threshold = cutoff * sigma_max;
  PsiBlocks out(n, psi.count());
  for (Index k = 0; k < n; ++k) {
    const auto& svd = svds[static_cast<std::size_t>(k)];
    Eigen::VectorXd inv = svd.singularValues();
    for (Index i = 0; i < inv.size(); ++i) inv[i] = inv[i] > threshold ? 1.0 / inv[i] : 0.0;
    out.set_frequency(k, svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint());
  }
  return out;
}

}  // namespace

PsiBlocks psi_pinv(const PsiBlocks& psi, double cutoff) {
  if (!(cutoff >= 0)) throw PreconditionError("psi_pinv cutoff must be non-negative");
  const Index n = psi.length();
  const Index count = psi.count();
  const double scale = psi.max_abs();
  if (scale == 0.0) return PsiBlocks(n, count);

  Grid a(count, count, n);
  for (Index j = 0; j < count; ++j)
    for (Index l = 0; l < count; ++l) a.at(j, l) = psi.block(j, l);
  try {
    const Grid inv = block_inverse(a, cutoff * scale);
    PsiBlocks out(n, count);
    for (Index j = 0; j < count; ++j)
      for (Index l = 0; l < count; ++l) out.block(j, l) = inv.at(j, l);
    return out;
  } catch (const SingularPivot&) {
    return svd_pinv(psi, cutoff);
  }
}

}  // namespace tensordict

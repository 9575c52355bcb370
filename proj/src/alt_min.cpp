#include "tensordict/alt_min.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "tensordict/circulant.hpp"

namespace tensordict::conv {

void AltMinConfig::validate() const {
  if (max_iters < 1) throw PreconditionError("max_iters must be positive");
  if (!(tol >= 0)) throw PreconditionError("tol must be non-negative");
  if (!(activation_ridge >= 0)) throw PreconditionError("activation_ridge must be non-negative");
  if (!(ridge_fallback > 0)) throw PreconditionError("ridge_fallback must be positive");
}

namespace {

using Spectra = std::vector<Eigen::MatrixXcd>;  // one n×N matrix per filter

Eigen::MatrixXcd column_ffts(const Eigen::MatrixXd& x) {
  Eigen::MatrixXcd out(x.rows(), x.cols());
  for (Index s = 0; s < x.cols(); ++s) out.col(s) = circulant::fft(Eigen::VectorXd(x.col(s)));
  return out;
}

Eigen::MatrixXcd filter_spectra(const Eigen::MatrixXd& f) { return column_ffts(f); }

struct Scores {
  double residual;
  double penalty;
};

// Parseval: ‖v‖² = (1/n) Σ_k |v̂(k)|², so both terms are evaluated spectrally.
Scores score(const Eigen::MatrixXcd& xh, const Eigen::MatrixXcd& fh, const Spectra& wh) {
  const Index n = xh.rows();
  Eigen::MatrixXcd r = xh;
  double penalty = 0.0;
  for (std::size_t l = 0; l < wh.size(); ++l) {
    r -= fh.col(static_cast<Index>(l)).asDiagonal() * wh[l];
    penalty += wh[l].squaredNorm();
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  return {r.squaredNorm() * inv_n, penalty * inv_n};
}

void activation_step(const Eigen::MatrixXcd& xh, const Eigen::MatrixXcd& fh, double mu, Spectra& wh) {
  // per frequency: ŵ = conj(v)·x̂ / (‖v‖² + μ) with v = (f̂_1(k), ..., f̂_L(k))
  const Index n = xh.rows();
  const Eigen::VectorXd energy = fh.rowwise().squaredNorm();
  for (std::size_t l = 0; l < wh.size(); ++l) {
    Eigen::VectorXcd gain(n);
    for (Index k = 0; k < n; ++k) {
      const double denom = energy[k] + mu;
      gain[k] = denom > 0 ? std::conj(fh(k, static_cast<Index>(l))) / denom : 0.0;
    }
    wh[l] = gain.asDiagonal() * xh;
  }
}

Eigen::MatrixXcd filter_step(const Eigen::MatrixXcd& xh, const Spectra& wh, double eps) {
  const Index n = xh.rows();
  const Index count = static_cast<Index>(wh.size());
  Eigen::MatrixXcd fh(n, count);
  for (Index k = 0; k < n; ++k) {
    Eigen::MatrixXcd w(count, xh.cols());
    for (Index l = 0; l < count; ++l) w.row(l) = wh[static_cast<std::size_t>(l)].row(k);
    Eigen::MatrixXcd gram = w.conjugate() * w.transpose();
    const Eigen::VectorXcd rhs = w.conjugate() * xh.row(k).transpose();
    const double scale = std::max(gram.diagonal().real().maxCoeff(), 1.0);
    Eigen::LDLT<Eigen::MatrixXcd> solver(gram);
    const double pivot = solver.vectorD().cwiseAbs().minCoeff();
    if (solver.info() != Eigen::Success || !(pivot > eps * scale)) {
      gram.diagonal().array() += eps * scale;
      solver.compute(gram);
    }
    fh.row(k) = solver.solve(rhs).transpose();
  }
  return fh;
}

}  // namespace

AltMinResult alt_min_from(const cumulant::SampleSet& samples, FilterBank initial,
                          const AltMinConfig& cfg) {
  cfg.validate();
  const Index n = samples.dim();
  const Index count = initial.count();
  if (initial.length() != n) throw ShapeError("alt_min: filter length differs from sample dimension");
  if (count >= n) warn("alt_min: L >= n, the filters are not identifiable");

  const Eigen::MatrixXcd xh = column_ffts(samples.matrix());
  Eigen::MatrixXd filters = initial.matrix();
  Eigen::MatrixXcd fh = filter_spectra(filters);
  Spectra wh(static_cast<std::size_t>(count), Eigen::MatrixXcd::Zero(n, samples.count()));
  const double mu = cfg.activation_ridge;

  std::vector<AltMinTracePoint> trace;
  auto record = [&](long iter, int stage) {
    const Scores s = score(xh, fh, wh);
    trace.push_back({iter, stage, s.residual, s.residual + mu * s.penalty});
    return trace.back().objective;
  };

  double previous = std::numeric_limits<double>::infinity();
  long iter = 0;
  while (iter < cfg.max_iters) {
    ++iter;
    activation_step(xh, fh, mu, wh);
    record(iter, 0);

    fh = filter_step(xh, wh, cfg.ridge_fallback);
    for (Index l = 0; l < count; ++l)
      filters.col(l) = circulant::ifft(Eigen::VectorXcd(fh.col(l))).real();
    record(iter, 1);

    for (Index l = 0; l < count; ++l) {
      const double norm = filters.col(l).norm();
      if (!(norm > 0) || !std::isfinite(norm)) {
        warn("alt_min: filter " + std::to_string(l) + " vanished; keeping the initial filter");
        filters.col(l) = initial.filter(l);
        continue;
      }
      filters.col(l) /= norm;
      wh[static_cast<std::size_t>(l)] *= norm;
    }
    fh = filter_spectra(filters);
    const double current = record(iter, 2);

    if (std::isfinite(previous) && previous - current <= cfg.tol * std::max(previous, 1e-300))
      break;
    previous = current;
  }

  Eigen::MatrixXd activations(n * count, samples.count());
  for (Index l = 0; l < count; ++l)
    for (Index s = 0; s < samples.count(); ++s)
      activations.block(l * n, s, n, 1) =
          circulant::ifft(Eigen::VectorXcd(wh[static_cast<std::size_t>(l)].col(s))).real();

  return AltMinResult{FilterBank::normalized(filters), std::move(activations), std::move(trace), iter};
}

AltMinResult alt_min_baseline(const cumulant::SampleSet& samples, Index count,
                              const AltMinConfig& cfg, Rng& rng) {
  if (count < 1) throw PreconditionError("alt_min needs L >= 1");
  return alt_min_from(samples, FilterBank::random(samples.dim(), count, rng), cfg);
}

}  // namespace tensordict::conv

#include "tensordict/conv_als.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include "tensordict/circulant.hpp"

namespace tensordict::conv {

void AlsConfig::validate() const {
  if (max_iters < 1) throw PreconditionError("max_iters must be positive");
  if (!(tol > 0)) throw PreconditionError("tol must be positive");
  if (!(pinv_cutoff > 0)) throw PreconditionError("pinv_cutoff must be positive");
  if (restarts < 1) throw PreconditionError("restarts must be positive");
}

Eigen::MatrixXd compute_M(const UnfoldedCumulant& c3, const FilterBank& g, const FilterBank& h,
                          double pinv_cutoff) {
  const Index n = c3.dim();
  if (g.length() != n || h.length() != n)
    throw ShapeError("compute_M: filter length differs from cumulant dimension");
  if (g.count() != h.count()) throw ShapeError("compute_M: banks differ in filter count");
  if (g.count() >= n)
    warn("compute_M: L >= n, (H⊙G) cannot have full column rank");

  const PsiBlocks psi = psi_build(g, h);
  if (psi.max_abs() < pinv_cutoff)
    throw DegenerateError("compute_M: all Ψ entries below cutoff (rank collapse)");

  const Eigen::MatrixXd gd = g.stacked_circulant();
  const Eigen::MatrixXd hd = h.stacked_circulant();
  const Index cols = gd.cols();

  // Row m of C3·(H⊙G) is diag(Gᵀ Γ^(m) H). Viewing C3 as an n²×n matrix with
  // row m + n·i and column j gives all Γ^(m)·H in one product.
  const Eigen::MatrixXd gamma_h = c3.matrix().reshaped(n * n, n) * hd;
  Eigen::MatrixXd khat(n, cols);
  for (Index r = 0; r < cols; ++r)
    khat.col(r) = gamma_h.col(r).reshaped(n, n) * gd.col(r);

  return khat * psi_pinv(psi, pinv_cutoff).conjugated_dense();
}

FilterBank filter_update(const Eigen::MatrixXd& m, Index count, const FilterBank* previous,
                         double cutoff) {
  if (count < 1 || m.cols() % count != 0) throw ShapeError("filter_update: M is not n×nL");
  const Index n = m.rows();
  if (m.cols() != n * count) throw ShapeError("filter_update: M is not n×nL");
  if (!m.allFinite()) throw PreconditionError("filter_update: M has non-finite entries");
  if (previous && (previous->length() != n || previous->count() != count))
    throw ShapeError("filter_update: fallback bank has the wrong shape");

  const Eigen::VectorXd norms = m.colwise().norm();
  const double floor = cutoff * norms.maxCoeff();
  Eigen::MatrixXd out(n, count);
  for (Index l = 0; l < count; ++l) {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
    Index used = 0;
    for (Index j = 0; j < n; ++j) {
      const Index col = l * n + j;
      if (!(norms[col] > floor)) continue;
      ++used;
      // column j of Cir(f) holds f shifted by j: entry i is f(i − j)
      for (Index i = 0; i < n; ++i) f[circulant::wrap(i - j, n)] += m(i, col) / norms[col];
    }
    const double fn = f.norm();
    if (used == 0 || !(fn > 0)) {
      if (previous) {
        out.col(l) = previous->filter(l);
        continue;
      }
      throw DegenerateBlockError(static_cast<int>(l),
                                 "filter_update: block " + std::to_string(l) + " of M is zero");
    }
    // dividing by the count of averaged columns is absorbed by the normalization
    out.col(l) = f / fn;
  }
  return FilterBank(std::move(out));
}

WeightDiag lambda_update(const Eigen::MatrixXd& m) { return m.colwise().norm().transpose(); }

double cumulant_recon_error(const UnfoldedCumulant& c3, const FilterBank& f, const WeightDiag& lambda,
                            const FilterBank& g, const FilterBank& h) {
  const Eigen::MatrixXd model =
      cp_unfolded<double>(f.stacked_circulant(), lambda, g.stacked_circulant(), h.stacked_circulant());
  const double diff = (c3.matrix() - model).norm();
  const double base = c3.matrix().norm();
  return base > 0 ? diff / base : diff;
}

namespace {

double max_change(const FilterBank& a, const FilterBank& b) {
  return (a.matrix() - b.matrix()).colwise().norm().maxCoeff();
}

}  // namespace

AlsResult ct_als_from(const UnfoldedCumulant& c3, FilterBank f, FilterBank g, FilterBank h,
                      const AlsConfig& cfg) {
  cfg.validate();
  const Index count = f.count();
  if (count >= c3.dim()) warn("ct_als: L >= n makes the decomposition redundant");

  WeightDiag lambda = Eigen::VectorXd::Ones(c3.dim() * count);
  std::vector<AlsTracePoint> trace;
  trace.push_back({0, cumulant_recon_error(c3, f, lambda, g, h),
                   std::numeric_limits<double>::quiet_NaN()});
  long iter = 0;
  bool converged = false;
  try {
    while (iter < cfg.max_iters) {
      ++iter;
      double change = 0.0;

      Eigen::MatrixXd m = compute_M(c3, g, h, cfg.pinv_cutoff);
      FilterBank next = filter_update(m, count, &f, cfg.pinv_cutoff);
      change = std::max(change, max_change(next, f));
      f = std::move(next);

      m = compute_M(c3, h, f, cfg.pinv_cutoff);
      next = filter_update(m, count, &g, cfg.pinv_cutoff);
      change = std::max(change, max_change(next, g));
      g = std::move(next);

      m = compute_M(c3, f, g, cfg.pinv_cutoff);
      next = filter_update(m, count, &h, cfg.pinv_cutoff);
      change = std::max(change, max_change(next, h));
      h = std::move(next);
      lambda = lambda_update(m);

      trace.push_back({iter, cumulant_recon_error(c3, f, lambda, g, h), change});
      if (change < cfg.tol) {
        converged = true;
        break;
      }
    }
  } catch (const DegenerateBlockError& e) {
    throw DegenerateBlockError(e.block(),
                               "iteration " + std::to_string(iter) + ": " + std::string(e.what()));
  }
  return AlsResult{std::move(f), std::move(g), std::move(h), std::move(lambda), std::move(trace),
                   iter, converged};
}

AlsResult ct_als(const UnfoldedCumulant& c3, Index count, const AlsConfig& cfg, Rng& rng) {
  cfg.validate();
  const Index n = c3.dim();
  if (count < 1) throw PreconditionError("ct_als needs L >= 1");
  std::optional<AlsResult> best;
  for (int r = 0; r < cfg.restarts; ++r) {
    FilterBank f = FilterBank::random(n, count, rng);
    FilterBank g = FilterBank::random(n, count, rng);
    FilterBank h = FilterBank::random(n, count, rng);
    AlsResult run = ct_als_from(c3, std::move(f), std::move(g), std::move(h), cfg);
    if (!best || run.trace.back().recon_error < best->trace.back().recon_error) best = std::move(run);
  }
  return std::move(*best);
}

double filter_recovery_error(const FilterBank& est, const FilterBank& truth, bool allow_sign) {
  if (est.length() != truth.length() || est.count() != truth.count())
    throw ShapeError("filter_recovery_error: banks differ in shape");
  const Index n = est.length();
  const Index count = est.count();
  if (count > 9) throw PreconditionError("filter_recovery_error: permutation search limited to L <= 9");

  // cost(a, b): best distance from estimate a to truth b over shifts and sign
  Eigen::MatrixXd cost(count, count);
  for (Index a = 0; a < count; ++a)
    for (Index b = 0; b < count; ++b) {
      double best = std::numeric_limits<double>::infinity();
      const Eigen::VectorXd t = truth.filter(b);
      for (Index s = 0; s < n; ++s) {
        const Eigen::VectorXd e = circulant::shift(est.filter(a), s);
        best = std::min(best, (e - t).norm());
        if (allow_sign) best = std::min(best, (e + t).norm());
      }
      cost(a, b) = best;
    }

  std::vector<Index> perm(static_cast<std::size_t>(count));
  std::iota(perm.begin(), perm.end(), Index{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (Index a = 0; a < count; ++a) total += cost(a, perm[static_cast<std::size_t>(a)]);
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best / static_cast<double>(count);
}

}  // namespace tensordict::conv

#include "tensordict/cumulant.hpp"

#include <cmath>
#include <string>

#include "tensordict/circulant.hpp"

namespace tensordict::cumulant {

UnfoldedCumulant::UnfoldedCumulant(Eigen::MatrixXd c3) : c3_(std::move(c3)) {
  if (c3_.rows() == 0 || c3_.cols() != c3_.rows() * c3_.rows())
    throw ShapeError("unfolded cumulant must be n×n²");
  if (!c3_.allFinite()) throw PreconditionError("cumulant has non-finite entries");
}

SampleSet::SampleSet(Eigen::MatrixXd x) : x_(std::move(x)) {
  if (x_.rows() == 0) throw ShapeError("samples must have dimension >= 1");
  if (x_.cols() < 1) throw InsufficientSamplesError("sample set needs N >= 1");
}

void validate(const ActivationSpec& act) {
  std::visit(
      [](const auto& a) {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, Poisson>) {
          if (!(a.mean > 0)) throw PreconditionError("poisson mean must be positive");
        } else {
          if (!(a.probability > 0 && a.probability <= 1))
            throw PreconditionError("activation probability must be in (0, 1]");
          if (!(a.scale >= 0)) throw PreconditionError("gaussian scale must be non-negative");
        }
      },
      act);
}

double activation_third_cumulant(const ActivationSpec& act) {
  return std::visit(
      [](const auto& a) -> double {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, Poisson>) {
          return a.mean;
        } else {
          const double p = a.probability, m = a.mean, s2 = a.scale * a.scale;
          const double m1 = p * m;
          const double m2 = p * (m * m + s2);
          const double m3 = p * (m * m * m + 3.0 * m * s2);
          return m3 - 3.0 * m1 * m2 + 2.0 * m1 * m1 * m1;
        }
      },
      act);
}

UnfoldedCumulant third_cumulant(const SampleSet& samples) {
  const Index n = samples.dim();
  const Index count = samples.count();
  if (count < 2) throw InsufficientSamplesError("third_cumulant needs at least 2 samples");
  const Eigen::MatrixXd& x = samples.matrix();

  // Cumulants are invariant to a constant shift; moments are accumulated
  // about the first sample to limit cancellation.
  const Eigen::VectorXd origin = x.col(0);
  Eigen::VectorXd m1 = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd m2 = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd m3 = Eigen::MatrixXd::Zero(n, n * n);

  constexpr Index kChunk = 2048;
  for (Index start = 0; start < count; start += kChunk) {
    const Index len = std::min(kChunk, count - start);
    const Eigen::MatrixXd c = x.middleCols(start, len).colwise() - origin;
    m1 += c.rowwise().sum();
    m2.noalias() += c * c.transpose();
    m3.noalias() += c * khatri_rao(c, c).transpose();
  }
  const double inv = 1.0 / static_cast<double>(count);
  m1 *= inv;
  m2 *= inv;
  m3 *= inv;

  // Z(a,b,c) = E[x_a]E[x_b x_c] + E[x_b]E[x_a x_c] + E[x_c]E[x_a x_b] − 2E[x_a]E[x_b]E[x_c];
  // (x⊙x) puts x_p x_q at p·n + q, which is column q + p·n of the unfolding.
  Eigen::MatrixXd c3 = m3;
  for (Index a = 0; a < n; ++a)
    for (Index p = 0; p < n; ++p)
      for (Index q = 0; q < n; ++q) {
        const double z = m1[a] * m2(p, q) + m1[p] * m2(a, q) + m1[q] * m2(a, p) -
                         2.0 * m1[a] * m1[p] * m1[q];
        c3(a, p * n + q) -= z;
      }
  return UnfoldedCumulant(std::move(c3));
}

Eigen::MatrixXd gamma_slice(const UnfoldedCumulant& c3, Index m) {
  const Index n = c3.dim();
  if (m < 0 || m >= n)
    throw IndexError("gamma_slice: row " + std::to_string(m) + " outside [0, " +
                     std::to_string(n) + ")");
  return c3.matrix().row(m).reshaped(n, n);
}

SyntheticData synth_conv_ica(const FilterBank& filters, const ActivationSpec& act, Index count,
                             Rng& rng, double noise_sigma) {
  validate(act);
  if (count < 1) throw InsufficientSamplesError("synth_conv_ica needs N >= 1");
  const Index n = filters.length();
  const Index big_l = filters.count();
  Eigen::MatrixXd w(n * big_l, count);
  std::visit(
      [&](const auto& a) {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, Poisson>) {
          std::poisson_distribution<int> draw(a.mean);
          for (Index s = 0; s < count; ++s)
            for (Index r = 0; r < w.rows(); ++r) w(r, s) = draw(rng);
        } else {
          std::bernoulli_distribution on(a.probability);
          std::normal_distribution<double> amp(a.mean, a.scale);
          for (Index s = 0; s < count; ++s)
            for (Index r = 0; r < w.rows(); ++r) {
              const bool active = on(rng);
              const double g = amp(rng);
              w(r, s) = active ? g : 0.0;
            }
        }
      },
      act);

  Eigen::MatrixXd x = filters.stacked_circulant() * w;
  if (noise_sigma > 0) x += noise_sigma * gaussian_matrix(n, count, rng);
  return SyntheticData{SampleSet(std::move(x)), std::move(w)};
}

UnfoldedCumulant cumulant_from_model(const FilterBank& filters, const Eigen::VectorXd& lambdas) {
  const Index n = filters.length();
  if (lambdas.size() != n * filters.count())
    throw ShapeError("cumulant_from_model needs one weight per shifted filter (nL)");
  if (filters.count() >= n)
    warn("cumulant_from_model: L >= n leaves the model redundant (requires nL<n² or L<n)");
  const Eigen::MatrixXd f = filters.stacked_circulant();
  return UnfoldedCumulant(cp_unfolded<double>(f, lambdas, f, f));
}

}  // namespace tensordict::cumulant

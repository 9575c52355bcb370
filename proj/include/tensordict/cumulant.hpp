#pragma once

// Third-order cumulants in unfolded form, and synthetic convolutional ICA data.

#include <Eigen/Dense>

#include <random>
#include <variant>

#include "tensordict/filter_bank.hpp"
#include "tensordict/random.hpp"
#include "tensordict/tensor.hpp"

namespace tensordict::cumulant {

/// n×n² unfolding C3 with column j + k·n holding C(:, j, k).
class UnfoldedCumulant {
 public:
  explicit UnfoldedCumulant(Eigen::MatrixXd c3);

  Index dim() const { return c3_.rows(); }
  const Eigen::MatrixXd& matrix() const { return c3_; }
  Tensor folded() const { return fold3(c3_); }

 private:
  Eigen::MatrixXd c3_;
};

/// Observations as the columns of an n×N matrix.
class SampleSet {
 public:
  explicit SampleSet(Eigen::MatrixXd x);

  Index dim() const { return x_.rows(); }
  Index count() const { return x_.cols(); }
  const Eigen::MatrixXd& matrix() const { return x_; }

 private:
  Eigen::MatrixXd x_;
};

struct Poisson {
  double mean = 0.5;
};

/// w = b·g with b ~ Bernoulli(p) and g ~ N(mean, scale²).
struct BernoulliGaussian {
  double probability = 0.1;
  double mean = 1.0;
  double scale = 1.0;
};

using ActivationSpec = std::variant<Poisson, BernoulliGaussian>;

void validate(const ActivationSpec& act);

/// Third cumulant of a single activation entry (λ* in the cumulant model).
double activation_third_cumulant(const ActivationSpec& act);

/// C3 = E[x (x⊙x)ᵀ] − unfold(Z) with plain 1/N averages, accumulated in one
/// pass over the samples. Throws InsufficientSamplesError when N < 2.
UnfoldedCumulant third_cumulant(const SampleSet& samples);

/// Γ^(m)(i, j) = C3(m, i + j·n), i.e. the slice C(m, :, :). m is 0-based.
Eigen::MatrixXd gamma_slice(const UnfoldedCumulant& c3, Index m);

struct SyntheticData {
  SampleSet samples;
  /// Row-stacked activations [w_1; ...; w_L], one column per sample (nL×N).
  Eigen::MatrixXd activations;
};

/// x = Σ_l f_l ∗ w_l (+ optional isotropic Gaussian noise), w entries i.i.d.
SyntheticData synth_conv_ica(const FilterBank& filters, const ActivationSpec& act, Index count,
                             Rng& rng, double noise_sigma = 0.0);

/// Exact model cumulant F Λ (F⊙F)ᵀ for the column-stacked circulant F of the
/// bank, with one weight per column of F (length nL).
UnfoldedCumulant cumulant_from_model(const FilterBank& filters, const Eigen::VectorXd& lambdas);

}  // namespace tensordict::cumulant

#pragma once

// Sample-domain baseline: alternating least squares between activation maps
// and filters for x ≈ Σ_l f_l ∗ w_l, solved per frequency.

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "tensordict/cumulant.hpp"
#include "tensordict/filter_bank.hpp"
#include "tensordict/random.hpp"

namespace tensordict::conv {

struct AltMinConfig {
  long max_iters = 100;
  /// Relative decrease of the penalized objective below which iteration stops.
  double tol = 1e-10;
  /// Ridge μ on the activations. With μ = 0 every frequency with a nonzero
  /// filter coefficient is fit exactly by the minimum-norm activations, so any
  /// filter bank is a fixed point.
  double activation_ridge = 0.1;
  /// Added to the per-frequency filter normal equations when they are singular.
  double ridge_fallback = 1e-8;
  std::uint64_t seed = 0;

  void validate() const;
};

struct AltMinTracePoint {
  long iter;
  /// 0 after the activation step, 1 after the filter step, 2 after renormalizing.
  int stage;
  /// Σ_s ‖x_s − Σ_l f_l ∗ w_l,s‖².
  double residual;
  /// residual + μ Σ ‖w‖².
  double objective;
};

struct AltMinResult {
  FilterBank filters;
  /// Row-stacked activations (nL×N), same layout as synth_conv_ica.
  Eigen::MatrixXd activations;
  std::vector<AltMinTracePoint> trace;
  long iterations;
};

AltMinResult alt_min_baseline(const cumulant::SampleSet& samples, Index count,
                              const AltMinConfig& cfg, Rng& rng);

/// Starts from a given bank instead of a random one.
AltMinResult alt_min_from(const cumulant::SampleSet& samples, FilterBank initial,
                          const AltMinConfig& cfg);

}  // namespace tensordict::conv

#pragma once

// Orthogonal 4th-order tensor decomposition by projected noisy stochastic
// gradient descent on the product of unit spheres.

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "tensordict/random.hpp"
#include "tensordict/tensor.hpp"

namespace tensordict::saddle {

/// d×k matrix whose columns all have unit ℓ2 norm.
class ComponentSet {
 public:
  static constexpr double kUnitTolerance = 1e-12;

  /// Throws PreconditionError unless every column is unit norm to 1e-12.
  explicit ComponentSet(Eigen::MatrixXd u);

  const Eigen::MatrixXd& matrix() const { return u_; }
  Index dim() const { return u_.rows(); }
  Index count() const { return u_.cols(); }
  Eigen::VectorXd component(Index i) const { return u_.col(i); }

  static ComponentSet random(Index d, Index k, Rng& rng);

 private:
  Eigen::MatrixXd u_;
};

enum class Schedule { Constant, InverseT };

struct SgdConfig {
  double eta = 1e-2;
  long iters = 10000;
  double noise_scale = 1.0;
  Index batch = 1;
  Schedule schedule = Schedule::Constant;
  long t_burn = 0;
  bool per_column_noise = false;
  long trace_every = 1;
  std::uint64_t seed = 0;

  void validate() const;
  /// η_t for t counted from 1. Inverse-t holds η for the first t_burn steps and
  /// then decays as η·t_burn/t (plain η/t when t_burn ≤ 1).
  double step_size(long t) const;
};

/// Z(i,i,i,i)=3, Z(i,i,j,j)=Z(i,j,i,j)=Z(i,j,j,i)=1 for i≠j, else 0.
Tensor z_tensor(Index d);

/// x = d^{1/4} a_i with i uniform; E[x^{⊗4}] = Σ a_i^{⊗4}. One draw per column.
Eigen::MatrixXd sample_simple(const Eigen::MatrixXd& components, Index count, Rng& rng);

/// y = A x with x uniform on {±1}^d. One draw per column.
Eigen::MatrixXd sample_ica(const Eigen::MatrixXd& mixing, Index count, Rng& rng);

double objective_single(const Tensor& t, const Eigen::VectorXd& u);
double objective_pairwise(const Tensor& t, const ComponentSet& u);

/// ‖T − Σ u_i^{⊗4}‖²_F / ‖T‖²_F.
double reconstruction_error(const Tensor& t, const ComponentSet& u);

/// Same quantity for T = Σ a_i^{⊗4} with orthonormal a_i, using only inner
/// products (‖T‖² = k_a, ⟨T, u^{⊗4}⟩ = Σ_i ⟨a_i,u⟩⁴).
double reconstruction_error_orthogonal(const Eigen::MatrixXd& truth, const ComponentSet& u);
double objective_pairwise_orthogonal(const Eigen::MatrixXd& truth, const ComponentSet& u);

/// Per-sample ICA loss φ(U, y) = Σ_{i≠j} ½(Z − y^{⊗4})(u_i,u_i,u_j,u_j)
/// averaged over the columns of `batch`.
double ica_loss(const Eigen::MatrixXd& u, const Eigen::MatrixXd& batch);

/// ∇_U of ica_loss. Column i is the batch average of
/// 2 Σ_{j≠i} (‖u_j‖² u_i + 2⟨u_i,u_j⟩u_j − ⟨u_j,y⟩²⟨u_i,y⟩ y).
Eigen::MatrixXd stoch_grad_ica(const Eigen::MatrixXd& u, const Eigen::MatrixXd& batch);

/// ∇_U of Σ_{i≠j} x^{⊗4}(u_i,u_i,u_j,u_j), batch-averaged; the gradient of the
/// pairwise objective under the simple-sampling oracle.
Eigen::MatrixXd stoch_grad_simple(const Eigen::MatrixXd& u, const Eigen::MatrixXd& batch);

/// Normalizes each column; throws DegenerateError on a zero column.
ComponentSet project_spheres(const Eigen::MatrixXd& raw);

/// Draws a batch and returns a stochastic gradient at U.
using GradientOracle = std::function<Eigen::MatrixXd(const Eigen::MatrixXd& u, Rng& rng)>;

GradientOracle make_simple_oracle(Eigen::MatrixXd components, Index batch);
GradientOracle make_ica_oracle(Eigen::MatrixXd mixing, Index batch);

struct TracePoint {
  long iter = 0;
  double objective = 0;
  double recon_error = 0;
};

using Evaluator = std::function<TracePoint(const ComponentSet&)>;

/// Evaluator for a dense order-4 tensor.
Evaluator dense_evaluator(Tensor t);
/// Evaluator for T = Σ a_i^{⊗4} with orthonormal a_i (columns of `truth`).
Evaluator orthogonal_evaluator(Eigen::MatrixXd truth);

struct SgdResult {
  ComponentSet components;
  std::vector<TracePoint> trace;
  long iterations = 0;
};

/// Iterates U ← Π(U − η_t (SG(U) + noise_scale·n)), n uniform on the unit
/// sphere of R^{d·k} (or per column when configured). The trace holds
/// iteration 0, every `trace_every`-th iteration and the last one.
/// Throws DivergenceError when iterates stop being finite or the objective
/// exceeds 1e6 times its initial magnitude.
SgdResult noisy_pgd(const GradientOracle& oracle, const Evaluator& evaluate,
                    const SgdConfig& config, const ComponentSet& initial, Rng& rng);

}  // namespace tensordict::saddle

#include "tensordict/saddle_sgd.hpp"

#include <cmath>
#include <string>

namespace tensordict::saddle {

namespace {

void require_orthonormal(const Eigen::MatrixXd& a, const char* what) {
  const Eigen::MatrixXd gram = a.transpose() * a;
  if ((gram - Eigen::MatrixXd::Identity(a.cols(), a.cols())).cwiseAbs().maxCoeff() > 1e-10)
    throw PreconditionError(std::string(what) + " must have orthonormal columns");
}

}  // namespace

ComponentSet::ComponentSet(Eigen::MatrixXd u) : u_(std::move(u)) {
  for (Index j = 0; j < u_.cols(); ++j)
    if (std::abs(u_.col(j).norm() - 1.0) > kUnitTolerance)
      throw PreconditionError("component " + std::to_string(j) + " is not unit norm");
}

ComponentSet ComponentSet::random(Index d, Index k, Rng& rng) {
  return project_spheres(gaussian_matrix(d, k, rng));
}

void SgdConfig::validate() const {
  if (!(eta >= 0)) throw PreconditionError("eta must be non-negative");
  if (iters <= 0) throw PreconditionError("iters must be positive");
  if (batch < 1) throw PreconditionError("batch must be at least 1");
  if (noise_scale < 0) throw PreconditionError("noise_scale must be non-negative");
  if (trace_every < 1) throw PreconditionError("trace_every must be at least 1");
  if (t_burn < 0) throw PreconditionError("t_burn must be non-negative");
}

double SgdConfig::step_size(long t) const {
  if (schedule == Schedule::Constant) return eta;
  const double hold = static_cast<double>(std::max(1L, t_burn));
  return eta / std::max(1.0, static_cast<double>(t) / hold);
}

Tensor z_tensor(Index d) {
  if (d < 1) throw ShapeError("z_tensor needs d >= 1");
  auto z = Tensor::cube(4, d);
  for (Index i = 0; i < d; ++i) {
    z(i, i, i, i) = 3;
    for (Index j = 0; j < d; ++j) {
      if (i == j) continue;
      z(i, i, j, j) = 1;
      z(i, j, i, j) = 1;
      z(i, j, j, i) = 1;
    }
  }
  return z;
}

Eigen::MatrixXd sample_simple(const Eigen::MatrixXd& components, Index count, Rng& rng) {
  require_orthonormal(components, "simple oracle components");
  const Index d = components.rows();
  const double scale = std::pow(static_cast<double>(d), 0.25);
  std::uniform_int_distribution<Index> pick(0, components.cols() - 1);
  Eigen::MatrixXd x(d, count);
  for (Index s = 0; s < count; ++s) x.col(s) = scale * components.col(pick(rng));
  return x;
}

Eigen::MatrixXd sample_ica(const Eigen::MatrixXd& mixing, Index count, Rng& rng) {
  if (mixing.rows() != mixing.cols()) throw ShapeError("ICA mixing matrix must be square");
  const Eigen::MatrixXd aat = mixing * mixing.transpose();
  if ((aat - Eigen::MatrixXd::Identity(mixing.rows(), mixing.rows())).cwiseAbs().maxCoeff() >
      1e-10)
    throw PreconditionError("ICA mixing matrix must satisfy A Aᵀ = I");
  std::bernoulli_distribution coin(0.5);
  Eigen::MatrixXd signs(mixing.cols(), count);
  for (Index s = 0; s < count; ++s)
    for (Index i = 0; i < mixing.cols(); ++i) signs(i, s) = coin(rng) ? 1.0 : -1.0;
  return mixing * signs;
}

double objective_single(const Tensor& t, const Eigen::VectorXd& u) {
  if (std::abs(u.norm() - 1.0) > 1e-10) throw PreconditionError("u must be unit norm");
  return multilinear_scalar(t, {u, u, u, u});
}

double objective_pairwise(const Tensor& t, const ComponentSet& u) {
  if (u.count() > u.dim())
    warn("objective_pairwise: more components than dimensions (redundant components)");
  const Eigen::MatrixXd q = pair_contractions(t, u.matrix());
  return q.sum() - q.trace();
}

double reconstruction_error(const Tensor& t, const ComponentSet& u) {
  const double tt = t.squared_norm();
  if (tt == 0.0) throw DegenerateError("reconstruction_error: zero tensor");
  const Eigen::MatrixXd q = pair_contractions(t, u.matrix());
  const Eigen::MatrixXd g = u.matrix().transpose() * u.matrix();
  const double model = g.array().pow(4).sum();
  return std::max(0.0, tt - 2.0 * q.trace() + model) / tt;
}

double reconstruction_error_orthogonal(const Eigen::MatrixXd& truth, const ComponentSet& u) {
  const double tt = static_cast<double>(truth.cols());
  if (tt == 0.0) throw DegenerateError("reconstruction_error: zero tensor");
  const Eigen::ArrayXXd p = (truth.transpose() * u.matrix()).array();
  const Eigen::MatrixXd g = u.matrix().transpose() * u.matrix();
  const double cross = p.pow(4).sum();
  const double model = g.array().pow(4).sum();
  return std::max(0.0, tt - 2.0 * cross + model) / tt;
}

double objective_pairwise_orthogonal(const Eigen::MatrixXd& truth, const ComponentSet& u) {
  const Eigen::MatrixXd p2 = (truth.transpose() * u.matrix()).array().square().matrix();
  const Eigen::MatrixXd q = p2.transpose() * p2;
  return q.sum() - q.trace();
}

double ica_loss(const Eigen::MatrixXd& u, const Eigen::MatrixXd& batch) {
  if (batch.rows() != u.rows()) throw ShapeError("sample dimension does not match U");
  if (batch.cols() == 0) throw InsufficientSamplesError("empty batch");
  // Z(u,u,v,v) = ‖u‖²‖v‖² + 2⟨u,v⟩².
  const Eigen::MatrixXd g = u.transpose() * u;
  const Eigen::VectorXd sq = g.diagonal();
  const Eigen::MatrixXd zpart = sq * sq.transpose() + 2.0 * g.cwiseProduct(g);
  const double zsum = zpart.sum() - zpart.trace();
  const Eigen::ArrayXXd p2 = (u.transpose() * batch).array().square();
  double ysum = 0;
  for (Index s = 0; s < batch.cols(); ++s) {
    const double tot = p2.col(s).sum();
    ysum += tot * tot - p2.col(s).square().sum();
  }
  ysum /= static_cast<double>(batch.cols());
  return 0.5 * (zsum - ysum);
}

Eigen::MatrixXd stoch_grad_ica(const Eigen::MatrixXd& u, const Eigen::MatrixXd& batch) {
  if (batch.rows() != u.rows()) throw ShapeError("sample dimension does not match U");
  if (batch.cols() == 0) throw InsufficientSamplesError("empty batch");
  const Index k = u.cols();
  const Eigen::MatrixXd g = u.transpose() * u;
  const Eigen::VectorXd sq = g.diagonal();
  const double total_sq = sq.sum();

  // Σ_{j≠i} ‖u_j‖² u_i + 2⟨u_i,u_j⟩ u_j
  Eigen::MatrixXd off = g;
  off.diagonal().setZero();
  Eigen::MatrixXd grad = u * (total_sq - sq.array()).matrix().asDiagonal();
  grad.noalias() += 2.0 * u * off;

  // Σ_{j≠i} ⟨u_j,y⟩²⟨u_i,y⟩ y, averaged over the batch
  const Eigen::ArrayXXd p = (u.transpose() * batch).array();  // k×B
  const Eigen::ArrayXXd p2 = p.square();
  const Eigen::RowVectorXd col_tot = p2.colwise().sum().matrix();
  Eigen::MatrixXd coef(batch.cols(), k);
  for (Index i = 0; i < k; ++i)
    coef.col(i) = ((col_tot.array() - p2.row(i)) * p.row(i)).transpose().matrix();
  grad.noalias() -= batch * coef / static_cast<double>(batch.cols());
  return 2.0 * grad;
}

Eigen::MatrixXd stoch_grad_simple(const Eigen::MatrixXd& u, const Eigen::MatrixXd& batch) {
  if (batch.rows() != u.rows()) throw ShapeError("sample dimension does not match U");
  if (batch.cols() == 0) throw InsufficientSamplesError("empty batch");
  const Eigen::ArrayXXd p = (u.transpose() * batch).array();
  const Eigen::ArrayXXd p2 = p.square();
  const Eigen::RowVectorXd col_tot = p2.colwise().sum().matrix();
  Eigen::MatrixXd coef(batch.cols(), u.cols());
  for (Index i = 0; i < u.cols(); ++i)
    coef.col(i) = ((col_tot.array() - p2.row(i)) * p.row(i)).transpose().matrix();
  return 4.0 * batch * coef / static_cast<double>(batch.cols());
}

ComponentSet project_spheres(const Eigen::MatrixXd& raw) {
  Eigen::MatrixXd u = raw;
  for (Index j = 0; j < u.cols(); ++j) {
    const double norm = u.col(j).norm();
    if (norm == 0.0 || !std::isfinite(norm))
      throw DegenerateError("project_spheres: column " + std::to_string(j) +
                            " has zero or non-finite norm");
    u.col(j) /= norm;
  }
  return ComponentSet(std::move(u));
}

GradientOracle make_simple_oracle(Eigen::MatrixXd components, Index batch) {
  require_orthonormal(components, "simple oracle components");
  return [components = std::move(components), batch](const Eigen::MatrixXd& u, Rng& rng) {
    return stoch_grad_simple(u, sample_simple(components, batch, rng));
  };
}

GradientOracle make_ica_oracle(Eigen::MatrixXd mixing, Index batch) {
  return [mixing = std::move(mixing), batch](const Eigen::MatrixXd& u, Rng& rng) {
    return stoch_grad_ica(u, sample_ica(mixing, batch, rng));
  };
}

Evaluator dense_evaluator(Tensor t) {
  return [t = std::move(t)](const ComponentSet& u) {
    TracePoint p;
    p.objective = objective_pairwise(t, u);
    p.recon_error = reconstruction_error(t, u);
    return p;
  };
}

Evaluator orthogonal_evaluator(Eigen::MatrixXd truth) {
  return [truth = std::move(truth)](const ComponentSet& u) {
    TracePoint p;
    p.objective = objective_pairwise_orthogonal(truth, u);
    p.recon_error = reconstruction_error_orthogonal(truth, u);
    return p;
  };
}

SgdResult noisy_pgd(const GradientOracle& oracle, const Evaluator& evaluate,
                    const SgdConfig& config, const ComponentSet& initial, Rng& rng) {
  config.validate();
  const Index d = initial.dim();
  const Index k = initial.count();
  std::vector<TracePoint> trace;
  TracePoint first = evaluate(initial);
  first.iter = 0;
  trace.push_back(first);
  const double limit = 1e6 * std::max(std::abs(first.objective), 1e-12);

  Eigen::MatrixXd u = initial.matrix();
  for (long t = 1; t <= config.iters; ++t) {
    const double eta = config.step_size(t);
    Eigen::MatrixXd step = oracle(u, rng);
    if (config.noise_scale > 0) {
      Eigen::MatrixXd noise(d, k);
      if (config.per_column_noise) {
        for (Index j = 0; j < k; ++j) noise.col(j) = unit_sphere(d, rng);
      } else {
        noise = unit_sphere(d * k, rng).reshaped(d, k);
      }
      step += config.noise_scale * noise;
    }
    const Eigen::MatrixXd v = u - eta * step;
    if (!v.allFinite())
      throw DivergenceError(t, "noisy_pgd diverged at iteration " + std::to_string(t));
    u = project_spheres(v).matrix();

    if (t % config.trace_every == 0 || t == config.iters) {
      TracePoint p = evaluate(ComponentSet(u));
      p.iter = t;
      if (!std::isfinite(p.objective) || std::abs(p.objective) > limit)
        throw DivergenceError(t, "noisy_pgd objective diverged at iteration " +
                                     std::to_string(t));
      trace.push_back(p);
    }
  }
  return SgdResult{ComponentSet(std::move(u)), std::move(trace), config.iters};
}

}  // namespace tensordict::saddle

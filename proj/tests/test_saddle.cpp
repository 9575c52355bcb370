#include <doctest.h>

#include <chrono>

#include "tensordict/errors.hpp"
#include "tensordict/saddle_sgd.hpp"

using namespace tensordict;
using namespace tensordict::saddle;

namespace {

// Direct sum over pairs; (Z − y⊗4)(u,u,v,v) = ‖u‖²‖v‖² + 2⟨u,v⟩² − ⟨u,y⟩²⟨v,y⟩².
double ica_loss_oracle(const Eigen::MatrixXd& u, const Eigen::MatrixXd& batch) {
  double total = 0;
  for (Index s = 0; s < batch.cols(); ++s)
    for (Index i = 0; i < u.cols(); ++i)
      for (Index j = 0; j < u.cols(); ++j) {
        if (i == j) continue;
        const double uu = u.col(i).squaredNorm() * u.col(j).squaredNorm() + 2 * std::pow(u.col(i).dot(u.col(j)), 2);
        total += 0.5 * (uu - std::pow(u.col(i).dot(batch.col(s)), 2) * std::pow(u.col(j).dot(batch.col(s)), 2));
      }
  return total / double(batch.cols());
}

double simple_objective_oracle(const Eigen::MatrixXd& u, const Eigen::MatrixXd& batch) {
  double total = 0;
  for (Index s = 0; s < batch.cols(); ++s)
    for (Index i = 0; i < u.cols(); ++i)
      for (Index j = 0; j < u.cols(); ++j)
        if (i != j) total += std::pow(u.col(i).dot(batch.col(s)), 2) * std::pow(u.col(j).dot(batch.col(s)), 2);
  return total / double(batch.cols());
}

template <typename F>
Eigen::MatrixXd finite_difference(const F& f, const Eigen::MatrixXd& u, double h = 1e-5) {
  Eigen::MatrixXd g(u.rows(), u.cols());
  for (Index i = 0; i < u.size(); ++i) {
    Eigen::MatrixXd up = u, dn = u;
    up.data()[i] += h;
    dn.data()[i] -= h;
    g.data()[i] = (f(up) - f(dn)) / (2 * h);
  }
  return g;
}

}  // namespace

TEST_SUITE("saddle") {

TEST_CASE("Z is the fourth moment of uniform sign vectors plus 2 sum e_i^4") {
  const Index d = 3;
  Tensor moment = Tensor::cube(4, d);
  for (int mask = 0; mask < (1 << d); ++mask) {
    Eigen::VectorXd x(d);
    for (Index i = 0; i < d; ++i) x[i] = (mask >> i) & 1 ? 1.0 : -1.0;
    moment = moment + (1.0 / (1 << d)) * outer_power(x, 4);
  }
  const Tensor expected = moment + 2.0 * symmetric_rank_sum4(Eigen::MatrixXd::Identity(d, d));
  CHECK((z_tensor(d) - expected).norm() < 1e-13);
}

TEST_CASE("ica_loss and its gradient") {
  Rng rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::MatrixXd u = gaussian_matrix(4, 3, rng);
    const Eigen::MatrixXd y = gaussian_matrix(4, 6, rng);
    CHECK(ica_loss(u, y) == doctest::Approx(ica_loss_oracle(u, y)).epsilon(1e-12));
    const Eigen::MatrixXd fd = finite_difference([&](const Eigen::MatrixXd& v) { return ica_loss_oracle(v, y); }, u);
    CHECK((stoch_grad_ica(u, y) - fd).norm() / fd.norm() < 1e-7);
  }
}

TEST_CASE("simple-oracle gradient matches finite differences") {
  Rng rng(32);
  const Eigen::MatrixXd u = gaussian_matrix(5, 3, rng);
  const Eigen::MatrixXd x = gaussian_matrix(5, 4, rng);
  const Eigen::MatrixXd fd = finite_difference([&](const Eigen::MatrixXd& v) { return simple_objective_oracle(v, x); }, u);
  CHECK((stoch_grad_simple(u, x) - fd).norm() / fd.norm() < 1e-7);
}

TEST_CASE("orthogonal shortcuts agree with the dense tensor") {
  Rng rng(33);
  const Eigen::MatrixXd a = random_orthogonal(4, rng).leftCols(3);
  const Tensor t = symmetric_rank_sum4(a);
  const auto u = ComponentSet::random(4, 3, rng);
  CHECK(reconstruction_error_orthogonal(a, u) == doctest::Approx(reconstruction_error(t, u)).epsilon(1e-10));
  CHECK(objective_pairwise_orthogonal(a, u) == doctest::Approx(objective_pairwise(t, u)).epsilon(1e-10));
  CHECK(reconstruction_error(t, ComponentSet(a)) < 1e-14);
}

TEST_CASE("samplers") {
  Rng rng(34);
  const Eigen::MatrixXd a = random_orthogonal(5, rng);
  const Eigen::MatrixXd x = sample_simple(a, 50, rng);
  for (Index s = 0; s < x.cols(); ++s) {
    // each draw is d^{1/4} times one of the columns
    const Eigen::VectorXd coef = a.transpose() * x.col(s);
    CHECK(coef.cwiseAbs().maxCoeff() == doctest::Approx(std::pow(5.0, 0.25)));
    CHECK(coef.squaredNorm() == doctest::Approx(std::sqrt(5.0)));
  }
  const Eigen::MatrixXd y = sample_ica(a, 50, rng);
  const Eigen::MatrixXd signs = a.transpose() * y;
  CHECK((signs.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
}

TEST_CASE("component sets stay on the spheres") {
  CHECK_THROWS_AS(ComponentSet(Eigen::MatrixXd::Ones(3, 2)), PreconditionError);
  Rng rng(35);
  const auto p = project_spheres(gaussian_matrix(4, 3, rng));
  CHECK((p.matrix().colwise().norm().array() - 1.0).abs().maxCoeff() < 1e-14);
  Eigen::MatrixXd zero = gaussian_matrix(4, 2, rng);
  zero.col(1).setZero();
  CHECK_THROWS_AS(project_spheres(zero), DegenerateError);
}

TEST_CASE("step-size schedules") {
  SgdConfig cfg;
  cfg.eta = 0.2;
  CHECK(cfg.step_size(1000) == 0.2);
  cfg.schedule = Schedule::InverseT;
  cfg.t_burn = 100;
  CHECK(cfg.step_size(1) == 0.2);
  CHECK(cfg.step_size(100) == 0.2);
  CHECK(cfg.step_size(400) == doctest::Approx(0.05));
  cfg.t_burn = 0;
  CHECK(cfg.step_size(4) == doctest::Approx(0.05));
  cfg.eta = -1;
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("noisy PGD is reproducible and converges on an easy instance") {
  Rng setup(36);
  const Eigen::MatrixXd a = random_orthogonal(5, setup);
  const auto init = ComponentSet::random(5, 5, setup);
  SgdConfig cfg;
  cfg.eta = 5e-3;
  cfg.iters = 6000;
  cfg.trace_every = 1000;
  Rng r1(7), r2(7);
  const auto res1 = noisy_pgd(make_simple_oracle(a, 1), orthogonal_evaluator(a), cfg, init, r1);
  const auto res2 = noisy_pgd(make_simple_oracle(a, 1), orthogonal_evaluator(a), cfg, init, r2);
  CHECK(res1.components.matrix() == res2.components.matrix());
  CHECK(res1.trace.front().iter == 0);
  CHECK(res1.trace.back().iter == 6000);
  CHECK(res1.trace.back().recon_error < 0.05);
}

TEST_CASE("divergence is reported") {
  Rng rng(37);
  const Eigen::MatrixXd a = random_orthogonal(3, rng);
  SgdConfig cfg;
  cfg.eta = 1.0;
  cfg.iters = 10;
  const GradientOracle blowup = [](const Eigen::MatrixXd& u, Rng&) {
    return Eigen::MatrixXd::Constant(u.rows(), u.cols(), std::numeric_limits<double>::infinity());
  };
  CHECK_THROWS_AS(noisy_pgd(blowup, orthogonal_evaluator(a), cfg, ComponentSet::random(3, 3, rng), rng),
                  DivergenceError);
}

TEST_CASE("Z entries") {
  const Tensor z2 = z_tensor(2);
  CHECK(z2(0, 0, 0, 0) == 3);
  CHECK(z2(0, 1, 0, 1) == 1);
  CHECK(z2(0, 0, 1, 1) == 1);
  CHECK(z2(0, 1, 1, 0) == 1);
  CHECK(z_tensor(4)(0, 1, 2, 3) == 0);
}

TEST_CASE("simple sampler moments") {
  Rng rng(38);
  const Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 1);
  CHECK(sample_simple(one, 20, rng) == Eigen::MatrixXd::Ones(1, 20));

  const Index d = 4, n = 100000;
  const Eigen::MatrixXd a = random_orthogonal(d, rng);
  const Eigen::MatrixXd x = sample_simple(a, n, rng);
  for (Index s = 0; s < 10; ++s) CHECK(x.col(s).norm() == doctest::Approx(std::pow(double(d), 0.25)));
  Tensor moment = Tensor::cube(4, d);
  for (Index s = 0; s < n; ++s) moment = moment + (1.0 / n) * outer_power(Eigen::VectorXd(x.col(s)), 4);
  CHECK((moment - symmetric_rank_sum4(a)).norm() < 0.05);
}

TEST_CASE("ICA sampler moments") {
  Rng rng(39);
  const Eigen::MatrixXd y2 = sample_ica(Eigen::MatrixXd::Identity(2, 2), 10000, rng);
  int counts[4] = {0, 0, 0, 0};
  for (Index s = 0; s < y2.cols(); ++s) counts[(y2(0, s) > 0) + 2 * (y2(1, s) > 0)]++;
  double chi2 = 0;
  for (int c : counts) chi2 += std::pow(c - 2500.0, 2) / 2500.0;
  CHECK(chi2 < 16.27);  // 3 degrees of freedom, p = 0.001

  const Index d = 3, n = 100000;
  const Eigen::MatrixXd a = random_orthogonal(d, rng);
  const Eigen::MatrixXd y = sample_ica(a, n, rng);
  for (Index s = 0; s < 10; ++s) CHECK(y.col(s).squaredNorm() == doctest::Approx(double(d)));
  Tensor moment = Tensor::cube(4, d);
  for (Index s = 0; s < n; ++s) moment = moment + (1.0 / n) * outer_power(Eigen::VectorXd(y.col(s)), 4);
  const Tensor half = 0.5 * (z_tensor(d) - moment);
  CHECK((half - symmetric_rank_sum4(a)).norm() < 0.1);
}

TEST_CASE("objective values on the standard basis") {
  const Tensor t = symmetric_rank_sum4(Eigen::MatrixXd::Identity(3, 3));
  CHECK(objective_single(t, Eigen::Vector3d(1, 0, 0)) == doctest::Approx(1.0));
  CHECK(objective_single(t, Eigen::Vector3d(1, 1, 0) / std::sqrt(2.0)) == doctest::Approx(0.5));

  Eigen::MatrixXd signed_perm = Eigen::MatrixXd::Zero(3, 3);
  signed_perm(1, 0) = -1;
  signed_perm(2, 1) = 1;
  signed_perm(0, 2) = -1;
  CHECK(objective_pairwise(t, ComponentSet(signed_perm)) == 0.0);
  CHECK(reconstruction_error(t, ComponentSet(signed_perm)) < 1e-15);

  Rng rng(40);
  const auto single = ComponentSet::random(3, 1, rng);
  CHECK(objective_pairwise(t, single) == 0.0);
  CHECK(stoch_grad_ica(single.matrix(), gaussian_matrix(3, 5, rng)).norm() == 0.0);
}

TEST_CASE("pairwise objective against a double loop of multilinear forms") {
  Rng rng(41);
  Tensor t = Tensor::cube(4, 3);
  t.data() = gaussian_vector(t.size(), rng);
  const auto u = ComponentSet::random(3, 3, rng);
  double s = 0;
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j)
      if (i != j) s += multilinear_scalar(t, {u.component(i), u.component(i), u.component(j), u.component(j)});
  CHECK(objective_pairwise(t, u) == doctest::Approx(s));
  CHECK(objective_single(t, u.component(0)) ==
        doctest::Approx(multilinear_scalar(t, {u.component(0), u.component(0), u.component(0), u.component(0)})));
}

TEST_CASE("reconstruction error against the Pythagorean expansion") {
  Rng rng(42);
  const Eigen::MatrixXd q = random_orthogonal(5, rng);
  const Eigen::MatrixXd truth = q.leftCols(2);
  // components in the orthogonal complement of the truth
  const auto u = project_spheres(q.rightCols(3) * gaussian_matrix(3, 2, rng));
  const Tensor t = symmetric_rank_sum4(truth);
  const Tensor model = symmetric_rank_sum4(u.matrix());
  CHECK(reconstruction_error(t, u) == doctest::Approx(1 + model.squared_norm() / t.squared_norm()));

  const auto v = ComponentSet::random(5, 2, rng);
  Eigen::MatrixXd swapped(5, 2);
  swapped.col(0) = -v.component(1);
  swapped.col(1) = v.component(0);
  CHECK(reconstruction_error(t, ComponentSet(swapped)) == doctest::Approx(reconstruction_error(t, v)));
}

TEST_CASE("sphere projection examples") {
  const auto p = project_spheres(Eigen::Vector2d(3, 4));
  CHECK((p.matrix() - Eigen::Vector2d(0.6, 0.8)).norm() < 1e-15);
  Rng rng(43);
  const auto u = ComponentSet::random(4, 3, rng);
  CHECK((project_spheres(u.matrix()).matrix() - u.matrix()).norm() < 1e-15);
  const auto once = project_spheres(gaussian_matrix(4, 3, rng));
  CHECK((project_spheres(once.matrix()).matrix() - once.matrix()).norm() < 1e-15);
}

TEST_CASE("no step and no noise leave the iterate unchanged; iterates stay unit norm") {
  Rng rng(44);
  const Eigen::MatrixXd a = random_orthogonal(4, rng);
  const auto init = ComponentSet::random(4, 4, rng);
  SgdConfig cfg;
  cfg.eta = 0;
  cfg.noise_scale = 0;
  cfg.iters = 50;
  // re-projection each step may move the last bit
  CHECK((noisy_pgd(make_ica_oracle(a, 10), orthogonal_evaluator(a), cfg, init, rng).components.matrix() -
         init.matrix()).cwiseAbs().maxCoeff() < 1e-14);

  cfg.eta = 0.05;
  cfg.noise_scale = 1;
  cfg.iters = 1;
  auto u = init;
  for (int t = 0; t < 200; ++t) {
    u = noisy_pgd(make_ica_oracle(a, 10), orthogonal_evaluator(a), cfg, u, rng).components;
    CHECK((u.matrix().colwise().norm().array() - 1.0).abs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("a batch-100 ICA gradient at d = 10 is cheap") {
  Rng rng(45);
  const Eigen::MatrixXd a = random_orthogonal(10, rng);
  const Eigen::MatrixXd u = ComponentSet::random(10, 10, rng).matrix();
  const Eigen::MatrixXd y = sample_ica(a, 100, rng);
  double best = 1e9;
  for (int rep = 0; rep < 5; ++rep) {
    const auto t0 = std::chrono::steady_clock::now();
    const Eigen::MatrixXd g = stoch_grad_ica(u, y);
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    CHECK(g.allFinite());
  }
  CHECK(best < 0.01);
}

TEST_CASE("the mean stochastic gradient approaches the population gradient") {
  Rng rng(46);
  const Index d = 3;
  const Eigen::MatrixXd a = random_orthogonal(d, rng);
  const Eigen::MatrixXd u = ComponentSet::random(d, 2, rng).matrix();
  // population loss: Σ_{i≠j} Σ_r ⟨u_i,a_r⟩²⟨u_j,a_r⟩², so the gradient is explicit
  Eigen::MatrixXd want = Eigen::MatrixXd::Zero(d, 2);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j)
      if (i != j)
        for (Index r = 0; r < d; ++r)
          want.col(i) += 4 * u.col(i).dot(a.col(r)) * std::pow(u.col(j).dot(a.col(r)), 2) * a.col(r);
  double previous = 1e9;
  for (Index n : {1000, 100000}) {
    const double err = (stoch_grad_ica(u, sample_ica(a, n, rng)) - want).norm();
    CHECK(err < 20.0 / std::sqrt(double(n)));
    CHECK(err < previous);
    previous = err;
  }
}

}

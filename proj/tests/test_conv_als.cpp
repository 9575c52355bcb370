#include <doctest.h>

#include "tensordict/circulant.hpp"
#include "tensordict/conv_als.hpp"
#include "tensordict/errors.hpp"

using namespace tensordict;
using namespace tensordict::conv;

namespace {

// (H ⊙ G) with row j + k n = G(j, :) .* H(k, :).
Eigen::MatrixXd kr_rows(const Eigen::MatrixXd& h, const Eigen::MatrixXd& g) {
  const Index n = g.rows();
  Eigen::MatrixXd out(n * n, g.cols());
  for (Index j = 0; j < n; ++j)
    for (Index k = 0; k < n; ++k) out.row(j + k * n) = g.row(j).cwiseProduct(h.row(k));
  return out;
}

Eigen::MatrixXd dense_M(const UnfoldedCumulant& c3, const FilterBank& g, const FilterBank& h) {
  const Eigen::MatrixXd gs = g.stacked_circulant(), hs = h.stacked_circulant();
  const Eigen::MatrixXd gram = (hs.transpose() * hs).cwiseProduct(gs.transpose() * gs);
  return c3.matrix() * kr_rows(hs, gs) * gram.completeOrthogonalDecomposition().pseudoInverse();
}

}  // namespace

TEST_SUITE("conv_als") {

TEST_CASE("compute_M equals the dense least-squares factor") {
  Rng rng(61);
  for (Index n : {3, 5, 6})
    for (Index count : {1, 2}) {
      const auto c3 = cumulant::third_cumulant(cumulant::SampleSet(gaussian_matrix(n, 300, rng).array().cube().matrix()));
      const FilterBank g = FilterBank::random(n, count, rng), h = FilterBank::random(n, count, rng);
      const Eigen::MatrixXd want = dense_M(c3, g, h);
      CHECK((compute_M(c3, g, h) - want).norm() / want.norm() < 1e-9);
    }
}

TEST_CASE("at the truth, M is F diag(lambda)") {
  Rng rng(62);
  const FilterBank f = FilterBank::random(7, 2, rng);
  const Eigen::VectorXd lam = Eigen::VectorXd::Constant(14, 0.5);
  const auto c3 = cumulant::cumulant_from_model(f, lam);
  const Eigen::MatrixXd m = compute_M(c3, f, f);
  CHECK((m - f.stacked_circulant() * lam.asDiagonal()).norm() < 1e-9);
  CHECK((lambda_update(m) - lam).norm() < 1e-9);
  CHECK(filter_recovery_error(filter_update(m, 2), f) < 1e-9);
  CHECK(cumulant_recon_error(c3, f, lam, f, f) < 1e-12);
}

TEST_CASE("filter_update hand example, n = 2") {
  const Eigen::MatrixXd m = (Eigen::MatrixXd(2, 2) << 1, 2, 3, 4).finished();
  // normalized columns c0 = (1,3)/sqrt10, c1 = (2,4)/sqrt20; f(i) = mean_j c_j(i + j)
  Eigen::VectorXd f(2);
  f << (1 / std::sqrt(10.0) + 4 / std::sqrt(20.0)) / 2, (3 / std::sqrt(10.0) + 2 / std::sqrt(20.0)) / 2;
  f.normalize();
  CHECK((filter_update(m, 1).filter(0) - f).norm() < 1e-14);
}

TEST_CASE("filter_update skips vanished columns and keeps the previous filter for empty blocks") {
  Rng rng(63);
  const FilterBank f = FilterBank::random(4, 2, rng);
  Eigen::MatrixXd m = f.stacked_circulant() * gaussian_vector(8, rng).cwiseAbs().asDiagonal();
  m.col(1).setZero();
  CHECK(filter_recovery_error(filter_update(m, 2), f) < 1e-12);
  m.rightCols(4).setZero();
  CHECK_THROWS_AS(filter_update(m, 2), DegenerateBlockError);
  const FilterBank prev = FilterBank::random(4, 2, rng);
  CHECK((filter_update(m, 2, &prev).filter(1) - prev.filter(1)).norm() == 0.0);
}

TEST_CASE("lambda_update returns column norms") {
  const Eigen::MatrixXd m = (Eigen::MatrixXd(2, 3) << 3, 0, 1, 4, 2, 1).finished();
  CHECK((lambda_update(m) - Eigen::Vector3d(5, 2, std::sqrt(2.0))).norm() < 1e-15);
}

TEST_CASE("recovery error ignores permutation, shift and sign") {
  Rng rng(64);
  const FilterBank truth = FilterBank::random(6, 3, rng);
  Eigen::MatrixXd moved(6, 3);
  moved.col(0) = -circulant::shift(truth.filter(2), 4);
  moved.col(1) = circulant::shift(truth.filter(0), 1);
  moved.col(2) = truth.filter(1);
  CHECK(filter_recovery_error(FilterBank(moved), truth) < 1e-14);
  CHECK(filter_recovery_error(FilterBank(moved), truth, false) > 0.1);
  const FilterBank other = FilterBank::random(6, 3, rng);
  CHECK(filter_recovery_error(other, truth) == doctest::Approx(filter_recovery_error(truth, other)));
}

TEST_CASE("ALS recovers a single planted filter") {
  Rng rng(65);
  const FilterBank f = FilterBank::random(8, 1, rng);
  const auto c3 = cumulant::cumulant_from_model(f, Eigen::VectorXd::Constant(8, 0.5));
  AlsConfig cfg;
  cfg.max_iters = 200;
  const auto res = ct_als(c3, 1, cfg, rng);
  CHECK(filter_recovery_error(res.f, f) < 1e-6);
  CHECK(res.trace.back().recon_error < 1e-8);
  CHECK(res.trace.front().iter == 0);
  CHECK(res.converged);
}

TEST_CASE("ALS recovers two planted filters when n = 16") {
  Rng rng(66);
  const FilterBank f = FilterBank::random(16, 2, rng);
  const auto c3 = cumulant::cumulant_from_model(f, Eigen::VectorXd::Constant(32, 0.5));
  AlsConfig cfg;
  cfg.restarts = 3;
  const auto res = ct_als(c3, 2, cfg, rng);
  CHECK(filter_recovery_error(res.f, f) < 1e-5);
}

TEST_CASE("restarts are deterministic under a fixed seed") {
  Rng data(67);
  const auto c3 = cumulant::cumulant_from_model(FilterBank::random(6, 2, data), Eigen::VectorXd::Constant(12, 1.0));
  AlsConfig cfg;
  cfg.max_iters = 20;
  cfg.restarts = 2;
  Rng a(1), b(1);
  CHECK(ct_als(c3, 2, cfg, a).f.matrix() == ct_als(c3, 2, cfg, b).f.matrix());
  cfg.restarts = 0;
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("zero cumulant gives zero M") {
  Rng rng(68);
  const UnfoldedCumulant zero(Eigen::MatrixXd::Zero(4, 16));
  CHECK(compute_M(zero, FilterBank::random(4, 2, rng), FilterBank::random(4, 2, rng)).norm() == 0.0);
}

TEST_CASE("filter_update on exact circulant input is scale invariant") {
  Rng rng(69);
  const FilterBank f = FilterBank::random(6, 1, rng);
  const Eigen::MatrixXd c = f.stacked_circulant();
  CHECK((filter_update(c, 1).filter(0) - f.filter(0)).norm() < 1e-14);
  CHECK((filter_update(3.7 * c, 1).filter(0) - f.filter(0)).norm() < 1e-14);
}

TEST_CASE("lambda_update small cases") {
  CHECK(lambda_update(Eigen::MatrixXd::Identity(2, 2)) == Eigen::Vector2d(1, 1));
  Rng rng(70);
  const FilterBank f = FilterBank::random(5, 1, rng);
  const Eigen::VectorXd lam = gaussian_vector(5, rng);
  CHECK((lambda_update(f.stacked_circulant() * lam.asDiagonal()) - lam.cwiseAbs()).norm() < 1e-14);
  const Eigen::MatrixXd m = gaussian_matrix(4, 8, rng);
  for (Index i = 0; i < 8; ++i) CHECK(lambda_update(m)[i] == doctest::Approx(std::sqrt(m.col(i).dot(m.col(i)))));
}

TEST_CASE("filter_update is locally optimal for its block subproblem") {
  Rng rng(71);
  const Index n = 6;
  const Eigen::MatrixXd m = gaussian_matrix(n, 2 * n, rng);
  const FilterBank f = filter_update(m, 2);
  // distance between normalized columns and the shifts of a candidate filter
  auto distance = [&](const Eigen::VectorXd& cand, Index l) {
    double d = 0;
    for (Index j = 0; j < n; ++j)
      d += (m.col(l * n + j).normalized() - circulant::shift(cand, j)).squaredNorm();
    return d;
  };
  for (Index l = 0; l < 2; ++l) {
    const double best = distance(f.filter(l), l);
    int worse = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      const Eigen::VectorXd probe = (f.filter(l) + 0.05 * gaussian_vector(n, rng)).normalized();
      worse += distance(probe, l) >= best;
    }
    CHECK(worse == 1000);
  }
}

TEST_CASE("ALS on a delta filter, trace contract and unit filters") {
  const FilterBank delta(Eigen::Vector4d(1, 0, 0, 0));
  const auto c3 = cumulant::cumulant_from_model(delta, Eigen::VectorXd::Ones(4));
  AlsConfig cfg;
  cfg.max_iters = 10;
  Rng rng(72);
  const auto res = ct_als(c3, 1, cfg, rng);
  CHECK(filter_recovery_error(res.f, delta) < 1e-6);
  CHECK(res.trace.size() <= std::size_t(cfg.max_iters) + 1);
  CHECK(res.trace.back().recon_error <= res.trace.front().recon_error);
  for (const auto* b : {&res.f, &res.g, &res.h})
    CHECK((b->matrix().colwise().norm().array() - 1.0).abs().maxCoeff() < 1e-10);
}

TEST_CASE("ALS drives the planted reconstruction error below 1e-6") {
  Rng rng(73);
  const FilterBank f = FilterBank::random(16, 2, rng);
  const auto c3 = cumulant::cumulant_from_model(f, Eigen::VectorXd::Constant(32, 0.5));
  AlsConfig cfg;
  cfg.restarts = 3;
  const auto res = ct_als(c3, 2, cfg, rng);
  CHECK(res.trace.back().recon_error < 1e-6);
  CHECK(res.trace.back().recon_error <= res.trace.front().recon_error);
}

TEST_CASE("recovery error of a shifted bank") {
  Rng rng(74);
  const FilterBank f = FilterBank::random(7, 2, rng);
  CHECK(filter_recovery_error(f, f) == 0.0);
  Eigen::MatrixXd moved = f.matrix();
  moved.col(0) = circulant::shift(f.filter(0), 3);
  moved.col(1) = circulant::shift(f.filter(1), 3);
  CHECK(filter_recovery_error(FilterBank(moved), f) < 1e-15);
}

}

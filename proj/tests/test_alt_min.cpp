#include <doctest.h>

#include "tensordict/alt_min.hpp"
#include "tensordict/conv_als.hpp"

using namespace tensordict;
using namespace tensordict::conv;

TEST_SUITE("alt_min") {

TEST_CASE("with no ridge the truth is a fixed point") {
  Rng rng(71);
  const FilterBank f = FilterBank::random(8, 2, rng);
  const auto data = cumulant::synth_conv_ica(f, cumulant::Poisson{0.5}, 500, rng);
  AltMinConfig cfg;
  cfg.activation_ridge = 0;
  cfg.max_iters = 5;
  const auto res = alt_min_from(data.samples, f, cfg);
  // Min-norm activations make each per-frequency filter system rank one, so
  // the fallback ridge is always active and shrinks by ~1e-8 per iteration.
  CHECK(filter_recovery_error(res.filters, f) < 1e-6);
  CHECK(res.trace.back().residual < 1e-16 * data.samples.matrix().squaredNorm() + 1e-20);
}

TEST_CASE("half-steps never increase the penalized objective") {
  Rng rng(72);
  const FilterBank f = FilterBank::random(6, 2, rng);
  const auto data = cumulant::synth_conv_ica(f, cumulant::Poisson{0.5}, 300, rng, 0.05);
  AltMinConfig cfg;
  cfg.max_iters = 30;
  const auto res = alt_min_baseline(data.samples, 2, cfg, rng);
  REQUIRE(res.trace.size() >= 3);
  for (std::size_t i = 0; i + 1 < res.trace.size(); ++i) {
    const auto& a = res.trace[i];
    const auto& b = res.trace[i + 1];
    if (b.stage == 1 || (a.stage == 2 && b.stage == 0))
      CHECK(b.objective <= a.objective * (1 + 1e-10) + 1e-12);
    if (b.stage == 2) CHECK(b.residual == doctest::Approx(a.residual).epsilon(1e-9));
  }
}

TEST_CASE("returned activations reproduce the final residual") {
  Rng rng(73);
  const FilterBank f = FilterBank::random(5, 2, rng);
  const auto data = cumulant::synth_conv_ica(f, cumulant::BernoulliGaussian{}, 200, rng, 0.1);
  AltMinConfig cfg;
  cfg.max_iters = 10;
  const auto res = alt_min_baseline(data.samples, 2, cfg, rng);
  CHECK(res.activations.rows() == 10);
  CHECK(res.activations.cols() == 200);
  const double residual =
      (data.samples.matrix() - res.filters.stacked_circulant() * res.activations).squaredNorm();
  CHECK(residual == doctest::Approx(res.trace.back().residual).epsilon(1e-8));
  CHECK(res.iterations <= 10);
}

TEST_CASE("configuration is validated") {
  AltMinConfig cfg;
  cfg.activation_ridge = -1;
  CHECK_THROWS(cfg.validate());
  cfg = {};
  cfg.max_iters = 0;
  CHECK_THROWS(cfg.validate());
}

}

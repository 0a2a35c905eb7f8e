#include <cmath>
#include <numbers>

#include "doctest.h"
#include "phlab/common/error.hpp"
#include "phlab/events/estimate.hpp"
#include "phlab/events/eta_moment.hpp"
#include "phlab/events/indicators.hpp"
#include "phlab/fields/grid.hpp"
#include "phlab/oracles/brute.hpp"

using namespace phlab;

namespace {
const DensityModel kCube = DensityModel::uniform_box(Vec3::Zero(), Vec3::Ones());
}

TEST_CASE("indicator_A examples") {
  ParticleConfiguration one({Vec3::Zero()}, 2.5);
  CHECK(indicator_A(one, 1.0, 2.5));
  ParticleConfiguration two({Vec3::Zero(), Vec3(0.1, 0, 0)}, 2.5);
  // eps = 2^{-1/3}; choose L so that 2 L eps^alpha = 0.2
  const double L = 0.1 / std::pow(two.eps(), 2.5);
  CHECK_FALSE(indicator_A(two, L, 2.5));
  CHECK(indicator_A(two, 0.5 * L, 2.5));
}

TEST_CASE("indicator_A is monotone in L") {
  const auto cfg = sample_configuration(kCube, 300, 8);
  bool prev = true;
  for (double L = 1e-4; L < 10.0; L *= 1.5) {
    const bool now = indicator_A(cfg, L, 2.5);
    CHECK((prev || !now));
    prev = now;
  }
}

TEST_CASE("smeared density sup examples") {
  ParticleConfiguration one({Vec3(0.5, 0.5, 0.5)}, 2.5);
  CHECK(smeared_density_sup(one, 0.3) == doctest::Approx(1.0));
  ParticleConfiguration twin({Vec3(0.5, 0.5, 0.5), Vec3(0.5, 0.5, 0.5)}, 2.5);
  const double s = smeared_cube_side(twin.eps(), 0.3);
  CHECK(smeared_density_sup(twin, 0.3) == doctest::Approx(2.0 / (2.0 * s * s * s)));
}

TEST_CASE("cube multiplicity sweep equals brute force") {
  for (std::uint64_t t = 0; t < 30; ++t) {
    const auto cfg = sample_configuration(kCube, 30 + t, t);
    const double side = 0.05 + 0.02 * static_cast<double>(t);
    CHECK(max_cube_multiplicity(cfg.centers(), side) == oracle::cube_multiplicity(cfg.centers(), side));
  }
}

TEST_CASE("smeared density lower bound and rasterized mass") {
  const auto cfg = sample_configuration(kCube, 500, 2);
  const double s = smeared_cube_side(cfg.eps(), 0.3);
  CHECK(smeared_density_sup(cfg, 0.3) >= 1.0 / (500.0 * s * s * s) * (1 - 1e-12));
  const BoxSpec box{Vec3(0.5, 0.5, 0.5), 3.0, 64};
  CHECK(rasterize(SmearedDensity::from(cfg, 0.3), box).integral() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("event estimates") {
  const auto yes = estimate_event_probability([](const ParticleConfiguration&) { return true; }, kCube, 10, 1000, 1);
  CHECK(yes.p_hat == 1.0);
  CHECK(yes.ci_low >= 0.99);
  const auto no = estimate_event_probability([](const ParticleConfiguration&) { return false; }, kCube, 10, 100, 1);
  CHECK(no.p_hat == 0.0);
  CHECK(no.ci_low == 0.0);
  CHECK_THROWS(estimate_event_probability([](const ParticleConfiguration&) { return true; }, kCube, 10, 29, 1));

  auto coin = [](const ParticleConfiguration& c) { return c.center(0).x() < 0.5; };
  const auto e1 = estimate_event_probability(coin, kCube, 1, 400, 3, 2.5, 1);
  const auto e8 = estimate_event_probability(coin, kCube, 1, 400, 3, 2.5, 8);
  CHECK(e1.successes == e8.successes);
  CHECK(e1.ci_low <= e1.p_hat);
  CHECK(e1.p_hat <= e1.ci_high);

  // doubling four times (16x trials) shrinks the interval about 4x
  double w_small = 0, w_large = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    w_small += estimate_event_probability(coin, kCube, 1, 100, s).ci_width();
    w_large += estimate_event_probability(coin, kCube, 1, 1600, s).ci_width();
  }
  CHECK(w_small / w_large == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("wilson interval invariants") {
  for (std::size_t n : {30u, 100u, 1000u})
    for (std::size_t k = 0; k <= n; k += n / 10) {
      const auto e = wilson_estimate(k, n);
      CHECK(0.0 <= e.ci_low);
      CHECK(e.ci_low <= e.p_hat);
      CHECK(e.p_hat <= e.ci_high);
      CHECK(e.ci_high <= 1.0);
    }
}

TEST_CASE("eta moments") {
  const std::size_t n = 1000;
  const double eps = 0.1;
  for (auto mode : {EtaMode::kMonteCarlo, EtaMode::kLayerCake})
    CHECK(eta_moment(kCube, n, 1.0, 1.0, 0.0, 100, mode, 3).value == 1.0);

  const auto k2 = eta_moment(kCube, n, 1.0, 1.0, 2.0, 200, EtaMode::kMonteCarlo, 3);
  CHECK(k2.value <= eps * eps * (1 + 1e-12));
  const auto k2l = eta_moment(kCube, n, 1.0, 1.0, 2.0, 200, EtaMode::kLayerCake, 3);
  CHECK(k2l.value <= eps * eps * (1 + 1e-12));

  // eta <= m eps^beta pointwise, so negative moments are bounded below
  const auto neg = eta_moment(kCube, n, 1.0, 0.5, -1.0, 200, EtaMode::kMonteCarlo, 4);
  CHECK(neg.value >= std::pow(0.5 * eps, -1.0) * (1 - 1e-12));

  CHECK_THROWS_AS(eta_moment(kCube, n, 1.0, 1.0, -3.0, 100, EtaMode::kMonteCarlo, 1), DomainError);

  // Monte Carlo against the layer-cake oracle at N = 1e4, kappa = -1
  const auto mc = eta_moment(kCube, 10000, 1.0, 1.0, -1.0, 2000, EtaMode::kMonteCarlo, 11);
  const auto lc = eta_moment(kCube, 10000, 1.0, 1.0, -1.0, 2000, EtaMode::kLayerCake, 11);
  CHECK(lc.exact_distribution);
  CHECK(std::abs(mc.value - lc.value) <= 3.0 * std::hypot(mc.std_error, lc.std_error));
}

TEST_CASE("uniform box nn survival against simulation") {
  const Box unit{};
  const std::size_t n = 200;
  const double s = 0.05;
  std::size_t hits = 0;
  const std::size_t trials = 4000;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto cfg = sample_configuration(kCube, n, 1000 + t);
    const Vec3 x0 = cfg.center(0);
    double d = HUGE_VAL;
    for (std::size_t j = 1; j < n; ++j) d = std::min(d, (cfg.center(j) - x0).norm());
    hits += d > s ? 1 : 0;
  }
  const double p = static_cast<double>(hits) / trials;
  const double exact = uniform_box_nn_survival(unit, n, s);
  CHECK(std::abs(p - exact) < 4.0 * std::sqrt(exact * (1 - exact) / trials));
  // far from the faces the law is the ball formula
  const double tau[3] = {1.0, 1.0, 1.0};
  CHECK(cut_ball_volume(0, tau) == doctest::Approx(4.0 * std::numbers::pi / 3.0));
  CHECK(cut_ball_volume(1, tau) == doctest::Approx(4.0 * std::numbers::pi / 3.0));
  const double zero[3] = {0.0, 0.0, 0.0};
  CHECK(cut_ball_volume(3, zero) == doctest::Approx(std::numbers::pi / 6.0));
}

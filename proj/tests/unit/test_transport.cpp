#include <cmath>
#include <random>

#include "doctest.h"
#include "phlab/common/error.hpp"
#include "phlab/common/rng.hpp"
#include "phlab/oracles/brute.hpp"
#include "phlab/transport/rate_fit.hpp"
#include "phlab/transport/transport.hpp"

using namespace phlab;

namespace {
const DensityModel kCube = DensityModel::uniform_box(Vec3::Zero(), Vec3::Ones());

std::vector<Vec3> cloud(std::size_t n, RandomStream& rng) {
  std::vector<Vec3> p(n);
  for (auto& x : p) x = Vec3(rng.uniform(), rng.uniform(), rng.uniform());
  return p;
}
}  // namespace

TEST_CASE("w2 basic examples") {
  RandomStream rng(5, 0);
  const auto x = cloud(40, rng);
  CHECK(w2_assignment(DiscreteMeasure::uniform(x), DiscreteMeasure::uniform(x)) <= 1e-12);
  const Vec3 a(0.1, 0.2, 0.3), b(0.4, -0.2, 1.0);
  CHECK(w2_assignment(DiscreteMeasure::uniform({a}), DiscreteMeasure::uniform({b})) == doctest::Approx((a - b).norm()).epsilon(1e-14));
}

TEST_CASE("w2 matches factorial and hungarian oracles") {
  for (std::uint64_t t = 0; t < 100; ++t) {
    RandomStream rng(t, 3);
    const std::size_t n = 1 + t % 6;
    const auto x = cloud(n, rng), y = cloud(n, rng);
    const double got = w2_assignment(DiscreteMeasure::uniform(x), DiscreteMeasure::uniform(y));
    const double brute = std::sqrt(oracle::w2_squared_permutations(x, y));
    CHECK(got == doctest::Approx(brute).epsilon(1e-10));
  }
  for (std::uint64_t t = 0; t < 10; ++t) {
    RandomStream rng(t, 4);
    const auto x = cloud(60, rng), y = cloud(60, rng);
    const double got = w2_assignment(DiscreteMeasure::uniform(x), DiscreteMeasure::uniform(y));
    CHECK(got * got == doctest::Approx(oracle::w2_squared_hungarian(x, y)).epsilon(1e-10));
  }
}

TEST_CASE("w2 with general weights") {
  RandomStream rng(9, 0);
  const auto x = cloud(5, rng), y = cloud(7, rng);
  std::vector<double> a(5), b(7);
  for (auto& v : a) v = 0.1 + rng.uniform();
  for (auto& v : b) v = 0.1 + rng.uniform();
  double sa = 0, sb = 0;
  for (double v : a) sa += v;
  for (double v : b) sb += v;
  for (auto& v : a) v /= sa;
  for (auto& v : b) v /= sb;
  const auto r = solve_transport(x, a, y, b);
  std::vector<double> ra(5, 0.0), rb(7, 0.0);
  double cost = 0;
  for (const auto& e : r.plan) {
    CHECK(e.mass >= 0.0);
    ra[e.i] += e.mass;
    rb[e.j] += e.mass;
    cost += e.mass * (x[e.i] - y[e.j]).squaredNorm();
  }
  for (std::size_t i = 0; i < 5; ++i) CHECK(ra[i] == doctest::Approx(a[i]).epsilon(1e-12));
  for (std::size_t j = 0; j < 7; ++j) CHECK(rb[j] == doctest::Approx(b[j]).epsilon(1e-12));
  CHECK(cost == doctest::Approx(r.cost).epsilon(1e-12));
  // the product coupling is admissible, so it cannot beat the optimum
  double product = 0;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 7; ++j) product += a[i] * b[j] * (x[i] - y[j]).squaredNorm();
  CHECK(r.cost <= product + 1e-12);
  CHECK_THROWS_AS(solve_transport(x, a, y, std::vector<double>(7, 0.5)), InvalidArgument);
}

TEST_CASE("w2 metric properties") {
  for (std::uint64_t t = 0; t < 10; ++t) {
    RandomStream rng(t, 6);
    const auto x = DiscreteMeasure::uniform(cloud(50, rng));
    const auto y = DiscreteMeasure::uniform(cloud(50, rng));
    const auto z = DiscreteMeasure::uniform(cloud(50, rng));
    CHECK(w2_assignment(x, z) <= w2_assignment(x, y) + w2_assignment(y, z) + 1e-12);
    CHECK(w2_assignment(x, y) == doctest::Approx(w2_assignment(y, x)).epsilon(1e-12));

    // dilation about a point scales W2 by the factor
    const double c = 2.5;
    auto dil = [&](const DiscreteMeasure& m) {
      std::vector<Vec3> p;
      for (const auto& q : m.points()) p.push_back(Vec3(0.3, 0.1, 0.7) + c * (q - Vec3(0.3, 0.1, 0.7)));
      return DiscreteMeasure::uniform(p);
    };
    CHECK(w2_assignment(dil(x), dil(y)) == doctest::Approx(c * w2_assignment(x, y)).epsilon(1e-10));
  }
}

TEST_CASE("w2 size caps") {
  RandomStream rng(1, 1);
  const auto big = DiscreteMeasure::uniform(cloud(4097, rng));
  CHECK_THROWS_AS(w2_assignment(big, big), SizeCapError);
  std::vector<Vec3> p = cloud(513, rng);
  std::vector<double> w(513, 1.0 / 513);
  w[0] += 1e-13;
  w[1] -= 1e-13;
  const DiscreteMeasure g(p, w);
  CHECK_THROWS_AS(w2_assignment(g, g), SizeCapError);
}

TEST_CASE("smeared plan cost") {
  ParticleConfiguration one({Vec3(0.5, 0.5, 0.5)}, 2.5);
  const auto c1 = w2_plan_cost_smeared(one, 0.3);
  CHECK(c1.plan_cost == doctest::Approx(0.5));
  CHECK(c1.admissible);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto cfg = sample_configuration(kCube, 100 + 50 * s, s);
    const auto c = w2_plan_cost_smeared(cfg, 0.3);
    CHECK(c.plan_cost <= c.bound);
    CHECK(c.admissible);
  }
  CHECK_THROWS_AS(w2_plan_cost_smeared(one, 1.0), DomainError);
}

TEST_CASE("exact W2 to the smeared density never exceeds the plan cost") {
  // discretize each cube by m^3 subcell centres; the discrete problem is an
  // exact lower-resolution copy of the smeared measure
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto cfg = sample_configuration(kCube, 4, s);
    const double side = w2_plan_cost_smeared(cfg, 0.3).cube_side;
    const int m = 4;
    std::vector<Vec3> sub;
    for (const auto& c : cfg.centers())
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          for (int k = 0; k < m; ++k)
            sub.push_back(c + side * (Vec3(i + 0.5, j + 0.5, k + 0.5) / m - Vec3::Constant(0.5)));
    std::vector<double> wa(cfg.size(), 1.0 / cfg.size());
    std::vector<double> wb(sub.size(), 1.0 / sub.size());
    const double exact = w2_assignment(DiscreteMeasure(cfg.centers(), wa), DiscreteMeasure(sub, wb));
    CHECK(exact <= w2_plan_cost_smeared(cfg, 0.3).plan_cost + 1e-12);
  }
}

TEST_CASE("empirical W2 against the density") {
  const auto cfg = sample_configuration(kCube, 64, 17);
  CHECK(w2_empirical_vs_density(kCube, cfg, 64, 17) == doctest::Approx(0.0).scale(1e-12));
  const double w = w2_empirical_vs_density(kCube, cfg, 256, 3);
  CHECK(w > 0.0);
  CHECK(w <= std::sqrt(3.0));
  CHECK(w2_empirical_vs_density(kCube, cfg, 256, 3) == w);
  CHECK_THROWS_AS(w2_empirical_vs_density(kCube, cfg, 10, 3), InvalidArgument);
  const auto huge = sample_configuration(kCube, kEmpiricalMaxN + 1, 1);
  CHECK_THROWS_AS(w2_empirical_vs_density(kCube, huge, 4 * (kEmpiricalMaxN + 1), 3), SizeCapError);
}

TEST_CASE("power law fits") {
  std::vector<std::pair<double, double>> sq, flat, noisy;
  std::mt19937_64 g(2);
  std::normal_distribution<double> z(0.0, 0.02);
  for (double s : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
    sq.emplace_back(s, 3.0 * s * s);
    flat.emplace_back(s, 7.0);
    noisy.emplace_back(s, std::pow(s, 1.5) * std::exp(z(g)));
  }
  const auto f2 = fit_power_law(sq);
  CHECK(f2.slope == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(std::exp(f2.intercept) == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(std::abs(fit_power_law(flat).slope) < 1e-12);
  const auto fn = fit_power_law(noisy);
  CHECK(std::abs(fn.slope - 1.5) < 0.1);
  CHECK(fn.slope_ci_low <= fn.slope);
  CHECK(fn.slope <= fn.slope_ci_high);
  CHECK_THROWS_AS(fit_power_law({{1, 1}, {2, 2}}), InvalidArgument);
  CHECK_THROWS_AS(fit_power_law({{1, 1}, {2, -2}, {3, 3}}), DomainError);
  CHECK_THROWS_AS(fit_power_law({{1, 1}, {1, 2}, {1, 3}}), DomainError);
}

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>

#include <boost/math/distributions/chi_squared.hpp>

#include "doctest.h"
#include "phlab/common/error.hpp"
#include "phlab/common/parallel.hpp"
#include "phlab/common/rng.hpp"
#include "phlab/geometry/configuration.hpp"
#include "phlab/geometry/mesh.hpp"
#include "phlab/geometry/neighbors.hpp"
#include "phlab/geometry/particle.hpp"
#include "phlab/geometry/truncation.hpp"
#include "phlab/oracles/brute.hpp"

using namespace phlab;

namespace {
const DensityModel kCube = DensityModel::uniform_box(Vec3::Zero(), Vec3::Ones());
}

TEST_CASE("rng streams are reproducible and disjoint") {
  RandomStream a(7, 3), b(7, 3), c(7, 4);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
  }
  RandomStream d = RandomStream::derive(1, {2, 3}), e = RandomStream::derive(1, {3, 2});
  CHECK(d.next_u64() != e.next_u64());
  RandomStream u(9, 0);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("sample_configuration basics") {
  const auto one = sample_configuration(kCube, 1, 123);
  CHECK(one.size() == 1);
  CHECK(one.eps() == 1.0);
  CHECK(Box{}.contains(one.center(0)));

  const auto eight = sample_configuration(kCube, 8, 5);
  CHECK(eight.eps() == 0.5);
  for (const auto& c : eight.centers()) CHECK(Box{}.contains(c));
  eight.check_support(kCube);

  CHECK_THROWS_AS(sample_configuration(kCube, 0, 1), InvalidArgument);
  const auto again = sample_configuration(kCube, 8, 5);
  CHECK(again.centers() == eight.centers());
}

TEST_CASE("piecewise grid sampling matches cell masses (chi-squared)") {
  std::vector<double> w{1, 2, 3, 4, 0.5, 6, 7, 8};
  const auto d = DensityModel::piecewise_grid({Vec3::Zero(), Vec3(2, 1, 1)}, {2, 2, 2}, w);
  double total = 0;
  for (double m : d.cell_masses()) total += m;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  const std::size_t n = 100000;
  const auto cfg = sample_configuration(d, n, 99);
  std::vector<double> counts(8, 0.0);
  for (const auto& p : cfg.centers()) {
    const int ix = std::min(static_cast<int>(p.x()), 1), iy = std::min(static_cast<int>(p.y() * 2), 1),
              iz = std::min(static_cast<int>(p.z() * 2), 1);
    counts[ix + 2 * (iy + 2 * iz)] += 1;
  }
  double chi2 = 0;
  for (int k = 0; k < 8; ++k) {
    const double e = n * d.cell_masses()[k];
    chi2 += (counts[k] - e) * (counts[k] - e) / e;
  }
  const double p = 1.0 - boost::math::cdf(boost::math::chi_squared(7), chi2);
  CHECK(p > 0.001);
}

TEST_CASE("density invariants") {
  const auto ball = DensityModel::uniform_ball(Vec3(0.5, 0.5, 0.5), 0.25);
  CHECK(ball(Vec3(2, 2, 2)) == 0.0);
  CHECK(ball(Vec3(0.5, 0.5, 0.5)) == ball.sup_norm());
  CHECK(ball.mass_in_box(ball.support_box()) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(ball.mass_in_box({Vec3(0, 0, 0), Vec3(1, 1, 0.5)}) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(ball.mass_in_box({Vec3(0, 0, 0), Vec3(0.5, 0.5, 0.5)}) == doctest::Approx(0.125).epsilon(1e-10));
  // cap of height h = r/2: pi h^2 (3r - h) / 3 over the ball volume
  CHECK(ball.mass_in_box({Vec3(0, 0, 0.625), Vec3(1, 1, 1)}) == doctest::Approx(5.0 / 32.0).epsilon(1e-10));
  CHECK(kCube.mass_in_box({Vec3(-1, -1, -1), Vec3(2, 2, 2)}) == doctest::Approx(1.0));
  CHECK(kCube(Vec3(1.5, 0.5, 0.5)) == 0.0);
  CHECK_THROWS_AS(DensityModel::uniform_box(Vec3::Ones(), Vec3::Zero()), InvalidArgument);
  CHECK_THROWS_AS(DensityModel::piecewise_grid({}, {2, 1, 1}, {0.0, 0.0}), InvalidArgument);
  // sup norm equals the largest evaluator value
  const auto g = DensityModel::piecewise_grid({}, {2, 1, 1}, {1.0, 3.0});
  CHECK(g.sup_norm() == doctest::Approx(g(Vec3(0.75, 0.5, 0.5))));
}

TEST_CASE("nearest neighbour examples") {
  ParticleConfiguration two({Vec3::Zero(), Vec3(0.3, 0, 0)}, 2.5);
  CHECK(two.nn_distances()[0] == doctest::Approx(0.3));
  CHECK(two.nn_distances()[1] == doctest::Approx(0.3));
  ParticleConfiguration line({Vec3::Zero(), Vec3(1, 0, 0), Vec3(3, 0, 0)}, 2.5);
  CHECK(line.nn_distances() == std::vector<double>{1.0, 1.0, 2.0});
  ParticleConfiguration single({Vec3::Zero()}, 2.5);
  CHECK(std::isinf(single.nn_distances()[0]));
}

TEST_CASE("spatial hash equals brute force on 100 configurations") {
  std::size_t mismatches = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    const std::size_t n = 2 + (t * 997) % 1999;
    const DensityModel& d = t % 3 == 0 ? DensityModel::uniform_ball(Vec3::Zero(), 1.0) : kCube;
    const auto cfg = sample_configuration(d, n, t);
    const auto brute = oracle::nn_distances(cfg.centers());
    if (cfg.nn_distances() != brute) ++mismatches;
  }
  CHECK(mismatches == 0);
}

TEST_CASE("truncation scales") {
  ParticleConfiguration single({Vec3(0.5, 0.5, 0.5)}, 2.5);
  CHECK(truncation_scales(single, 1.0, 1.0).eta[0] == 1.0);
  ParticleConfiguration two({Vec3::Zero(), Vec3(0.1, 0, 0)}, 2.5);  // eps^beta < 1 here
  const auto s = truncation_scales(two, 1.0, 1.0);
  CHECK(s.eta[0] == doctest::Approx(0.1));
  CHECK(s.eta[1] == doctest::Approx(0.1));
  CHECK_THROWS_AS(truncation_scales(two, 0.5, 1.0), DomainError);
  CHECK_THROWS_AS(truncation_scales(two, 2.5, 0.5), DomainError);
  CHECK_THROWS_AS(truncation_scales(two, 1.0, 0.0), DomainError);

  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto cfg = sample_configuration(kCube, 500, seed);
    const auto sc = truncation_scales(cfg, 1.5, 0.7);
    const double cap = 0.7 * std::pow(cfg.eps(), 1.5);
    std::size_t overlaps = 0;
    for (std::size_t i = 0; i < cfg.size(); ++i) {
      CHECK(sc.eta[i] <= cap);
      CHECK(sc.eta[i] <= cfg.nn_distances()[i]);
      for (std::size_t j = i + 1; j < cfg.size(); ++j)
        if ((cfg.center(i) - cfg.center(j)).norm() < 0.5 * (sc.eta[i] + sc.eta[j])) ++overlaps;
    }
    CHECK(overlaps == 0);
  }
}

TEST_CASE("configuration text round trip") {
  const auto cfg = sample_configuration(kCube, 17, 4, 2.2);
  const auto path = std::filesystem::temp_directory_path() / "phlab_cfg_roundtrip.txt";
  cfg.save(path);
  const auto back = ParticleConfiguration::load(path);
  CHECK(back.centers() == cfg.centers());
  CHECK(back.alpha() == cfg.alpha());
  CHECK(back.seed() == cfg.seed());
  std::filesystem::remove(path);
}

TEST_CASE("reference particle invariants") {
  CHECK(ReferenceParticle::sphere().radius() == 0.125);
  CHECK_THROWS(ReferenceParticle::sphere(0.25));
  CHECK_THROWS(ReferenceParticle::sphere(0.0));
  const SurfaceMesh m = icosphere(2, 0.2);
  CHECK(m.vertices.size() == 162);
  CHECK(is_closed_consistently_oriented(m));
  CHECK(signed_volume(m) > 0.0);
  CHECK(std::abs(winding_number(m, Vec3::Zero()) - 1.0) < 1e-9);
  const auto p = ReferenceParticle::from_mesh(m);
  CHECK(!p.is_sphere());
  CHECK_THROWS_AS(ReferenceParticle::from_mesh(icosphere(1, 0.3)), DomainError);
  SurfaceMesh flipped = m;
  for (auto& f : flipped.faces) std::swap(f[1], f[2]);
  CHECK_THROWS_AS(ReferenceParticle::from_mesh(flipped), DomainError);
  SurfaceMesh shifted = m;
  for (auto& v : shifted.vertices) v += Vec3(0.22, 0, 0);
  CHECK_THROWS_AS(ReferenceParticle::from_mesh(shifted), DomainError);
}

TEST_CASE("parallel_for result does not depend on thread count") {
  std::vector<double> a(1000), b(1000);
  auto body = [](std::vector<double>& out) {
    return [&out](std::size_t i) {
      RandomStream r = RandomStream::derive(5, {i});
      out[i] = r.uniform();
    };
  };
  parallel_for(a.size(), 1, body(a));
  parallel_for(b.size(), 8, body(b));
  CHECK(a == b);
  CHECK(pairwise_sum(a) == pairwise_sum(b));
}

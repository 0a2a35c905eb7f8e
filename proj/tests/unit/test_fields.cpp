#include <cmath>
#include <filesystem>
#include <numbers>

#include "doctest.h"
#include "phlab/common/error.hpp"
#include "phlab/fields/brinkman.hpp"
#include "phlab/fields/grid.hpp"
#include "phlab/oracles/brute.hpp"
#include "phlab/transport/transport.hpp"

using namespace phlab;
using std::numbers::pi;

namespace {
const DensityModel kCube = DensityModel::uniform_box(Vec3::Zero(), Vec3::Ones());
const BoxSpec kBox{Vec3(0.5, 0.5, 0.5), 2.0, 64};

GridField sine_mode(const BoxSpec& b, double amp) {
  GridField f(b);
  for (int i = 0; i < b.n; ++i)
    for (int j = 0; j < b.n; ++j)
      for (int k = 0; k < b.n; ++k)
        f.at(i, j, k) = amp * std::sin(2 * pi * (b.cell_center(i, j, k).x() - b.lo().x()) / b.side);
  return f;
}
}  // namespace

TEST_CASE("rasterization conserves mass") {
  CHECK(rasterize(DiscreteMeasure::uniform({Vec3(0.31, 0.52, 0.77)}), kBox).integral() == doctest::Approx(1.0).epsilon(1e-12));
  const BoxSpec b{Vec3::Zero(), 2.0, 64};
  CHECK(rasterize(SphereSurfaceMeasure{Vec3(0.1, 0, 0), 4 * b.h()}, b).integral() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rasterize(kCube, kBox).integral() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rasterize(DensityModel::uniform_ball(Vec3(0.5, 0.5, 0.5), 0.4), kBox).integral() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("grid pairing against direct sums") {
  RandomStream rng(3, 0);
  std::vector<Vec3> p(100);
  for (auto& x : p) x = Vec3(rng.uniform(), rng.uniform(), rng.uniform());
  auto psi = [](const Vec3& x) { return std::exp(-(x - Vec3(0.5, 0.5, 0.5)).squaredNorm() / (2 * 0.3 * 0.3)); };
  double direct = 0;
  for (const auto& x : p) direct += psi(x) / 100;
  const BoxSpec b{Vec3(0.5, 0.5, 0.5), 2.0, 256};
  CHECK(std::abs(rasterize(DiscreteMeasure::uniform(p), b).pair(psi) / direct - 1) < 1e-4);
}

TEST_CASE("H^-1 norm examples") {
  CHECK(h_neg1_norm(GridField(kBox)) == 0.0);
  for (int n : {32, 64}) {
    const BoxSpec b{Vec3(0.5, 0.5, 0.5), 2.0, n};
    const double exact = oracle::single_mode_hneg1(1.0, Vec3(1, 0, 0), b.side);
    CHECK(std::abs(h_neg1_norm(sine_mode(b, 1.0)) / exact - 1) < 1e-6);
  }
  // homogeneity
  const double one = h_neg1_norm(sine_mode(kBox, 1.0));
  CHECK(h_neg1_norm(sine_mode(kBox, -3.0)) == doctest::Approx(3.0 * one).epsilon(1e-12));

  // invariant under circular shifts of the samples
  const BoxSpec wide{Vec3(0.5, 0.5, 0.5), 3.0, 64};
  auto f = rasterize(kCube, wide) - rasterize(DensityModel::uniform_box(Vec3(0.1, 0, 0), Vec3(1.1, 1, 1)), wide);
  GridField g(wide);
  const int n = wide.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) g.at((i + 5) % n, (j + 11) % n, (k + 3) % n) = f.at(i, j, k);
  CHECK(h_neg1_norm(g) == doctest::Approx(h_neg1_norm(f)).epsilon(1e-10));

  // a translate by t is at W2 distance t, hence H^-1 distance <= t
  for (double t : {0.05, 0.1, 0.2}) {
    const BoxSpec b{Vec3(0.6, 0.5, 0.5), 4.0, 128};
    auto d = rasterize(kCube, b) - rasterize(DensityModel::uniform_box(Vec3(t, 0, 0), Vec3(1 + t, 1, 1)), b);
    CHECK(h_neg1_norm(d) <= t);
  }
}

TEST_CASE("H^-1 norm converges under refinement") {
  auto diff = [](int n) {
    const BoxSpec b{Vec3(0.5, 0.5, 0.5), 3.0, n};
    return h_neg1_norm(rasterize(kCube, b) - rasterize(DensityModel::uniform_ball(Vec3(0.5, 0.5, 0.5), 0.5), b));
  };
  const double c = diff(64), f = diff(128);
  CHECK(std::abs(c / f - 1) < 0.01);
}

TEST_CASE("H^-1 norm errors") {
  auto f = rasterize(kCube, kBox);
  CHECK_THROWS_AS(h_neg1_norm(f), DomainError);
  const double dropped = h_neg1_norm(f, true);
  CHECK(std::isfinite(dropped));
  CHECK(dropped > 0.0);
  CHECK_THROWS_AS((BoxSpec{Vec3::Zero(), 1.0, 48}.validate()), InvalidArgument);
  CHECK_THROWS_AS((BoxSpec{Vec3::Zero(), 1.0, 16}.validate()), InvalidArgument);
  const BoxSpec tight{Vec3(0.5, 0.5, 0.5), 1.2, 32};
  CHECK_THROWS_AS(rasterize(kCube, tight), DomainError);
}

TEST_CASE("grid export round trip") {
  const auto path = std::filesystem::temp_directory_path() / "phlab_grid_roundtrip.bin";
  const auto f = sine_mode(BoxSpec{Vec3(0.1, 0.2, 0.3), 1.5, 32}, 0.7);
  export_grid(f, path);
  const auto g = import_grid(path);
  CHECK(g.box().n == 32);
  CHECK(g.box().side == 1.5);
  CHECK(g.box().center == Vec3(0.1, 0.2, 0.3));
  CHECK(g.values() == f.values());
  std::filesystem::remove(path);
  CHECK_THROWS_AS(import_grid(path), IoError);
}

TEST_CASE("Brinkman pairing") {
  const Mat3 R = 6 * pi * 0.125 * Mat3::Identity();
  const BoxSpec b{Vec3(0.5, 0.5, 0.5), 2.0, 32};
  const auto cfg = sample_configuration(kCube, 200, 5);
  const auto sc = truncation_scales(cfg, 1.0, 0.5);
  BrinkmanOptions o;
  o.w2 = 0.1;

  const auto zero = brinkman_gap_pairing(cfg, sc, R, kCube, TestField::constant(Vec3::Zero()), b, o);
  CHECK(zero.gap == 0.0);

  // a constant field sees only the boundary traction, which integrates to R
  ParticleConfiguration one({Vec3(0.5, 0.5, 0.5)}, 2.5);
  TruncationScales big{1.0, 1.0, {0.8}};
  const Vec3 c(1, 2, 3);
  const auto r = brinkman_gap_pairing(one, big, R, kCube, TestField::constant(c), b, o);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(r.m_pairing[k] - r.rho_r_pairing[k]) < 1e-9 * r.rho_r_pairing.norm());

  const auto g = brinkman_gap_pairing(cfg, sc, R, kCube, TestField::gaussian(Vec3(0.5, 0.5, 0.5), 0.15, Vec3(1, 0.5, -0.25)), b, o);
  CHECK(std::isfinite(g.gap));
  CHECK(g.parts.sum() > 0.0);
  CHECK(g.parts.w2 == 0.1);
}

TEST_CASE("integration against a density") {
  const Vec3 v = integrate_against_density(kCube, [](const Vec3& x) { return Vec3(1.0, x.x(), x.y() * x.z()); });
  CHECK(v[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(v[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(v[2] == doctest::Approx(0.25).epsilon(1e-12));
}

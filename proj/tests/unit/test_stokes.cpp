#include <cmath>
#include <numbers>

#include "doctest.h"
#include "phlab/common/error.hpp"
#include "phlab/geometry/mesh.hpp"
#include "phlab/geometry/particle.hpp"
#include "phlab/oracles/brute.hpp"
#include "phlab/stokes/corrector.hpp"
#include "phlab/stokes/resistance.hpp"
#include "phlab/stokes/sphere_solution.hpp"

using namespace phlab;
using std::numbers::pi;

namespace {
Vec3 unit_dir(double th, double ph) { return Vec3(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)); }
}  // namespace

TEST_CASE("sphere solution boundary values and decay") {
  const SphereStokesSolution s(0.7);
  for (int k = 0; k < 3; ++k)
    for (double th : {0.1, 1.0, 2.5})
      for (double ph : {0.0, 2.0, 4.0}) {
        const auto v = s.eval(k, 0.7 * unit_dir(th, ph));
        CHECK((v.velocity - Vec3::Unit(k)).norm() < 1e-14);
      }
  CHECK(s.eval(0, Vec3(1e4, 0, 0)).velocity.norm() < 1e-3);
  CHECK_THROWS_AS(s.eval(0, Vec3(0.5, 0, 0)), DomainError);
}

TEST_CASE("sphere solution satisfies Stokes equations") {
  const SphereStokesSolution s(1.0);
  const double h = 1e-4;
  for (int k = 0; k < 3; ++k) {
    const Vec3 y(1.3, -0.8, 0.9);
    const auto v = s.eval(k, y);
    CHECK(std::abs(v.gradient.trace()) < 1e-12);
    // -Lap w + grad p = 0 by central differences of the analytic gradient
    Vec3 res = Vec3::Zero();
    for (int d = 0; d < 3; ++d) {
      const Vec3 e = h * Vec3::Unit(d);
      const auto vp = s.eval(k, y + e), vm = s.eval(k, y - e);
      res -= (vp.gradient.col(d) - vm.gradient.col(d)) / (2 * h);
      res[d] += (vp.pressure - vm.pressure) / (2 * h);
      CHECK(((vp.velocity - vm.velocity) / (2 * h) - v.gradient.col(d)).norm() < 1e-7);
    }
    CHECK(res.norm() < 1e-6);
  }
}

TEST_CASE("traction integrates to Stokes drag") {
  for (double R : {2.0, 4.0, 8.0}) {
    const Vec3 f = oracle::sphere_traction(1.0, 0, R, 64);
    CHECK(std::abs(f[0] / (6 * pi) - 1) < 5e-3);
    CHECK(std::abs(f[1]) < 1e-6);
  }
}

TEST_CASE("corrector regions and values") {
  const double eps = 0.1, alpha = 2.5, eta = 0.05, a = 0.125;
  const CorrectorField w({Vec3::Zero()}, eps, alpha, {eta}, a);
  const double ea = w.eps_alpha();
  CHECK(w.eval(Vec3(0.5 * a * ea, 0, 0)).region == CorrectorRegion::kHole);
  CHECK(corrector_eval(w, Vec3(0.5 * a * ea, 0, 0)).norm() == 0.0);
  CHECK(w.eval(Vec3(0.2 * eta, 0, 0)).region == CorrectorRegion::kInner);
  CHECK(w.eval(Vec3(0.3 * eta, 0, 0)).region == CorrectorRegion::kBlend);
  const auto far = w.eval(Vec3(0.6 * eta, 0, 0));
  CHECK(far.region == CorrectorRegion::kOuter);
  CHECK(far.w == Mat3::Identity());

  // continuity across the hole boundary and both ends of the annulus
  const Vec3 dir = unit_dir(0.7, 1.1);
  for (double r : {a * ea, eta / 4, eta / 2}) {
    const Mat3 in = corrector_eval(w, (r * (1 - 1e-9)) * dir);
    const Mat3 out = corrector_eval(w, (r * (1 + 1e-9)) * dir);
    CHECK((in - out).norm() < 1e-6);
  }

  // divergence free in C_i and D_i
  for (double r : {0.1 * eta, 0.3 * eta, 0.45 * eta}) {
    const auto v = w.eval(r * dir);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(v.grad[k].trace()) < 1e-9 * (1 + v.grad[k].norm()));
  }
}

TEST_CASE("corrector norms") {
  const double alpha = 2.5, eta = 0.0625, a = 0.125;
  const CorrectorField far({Vec3::Zero()}, 0.1, alpha, {eta}, a);
  // pointwise |w - Id| <= C eps^alpha / |x - x_i| in C_i; C fitted at the coarsest eps and frozen
  const Vec3 dir = unit_dir(1.2, 0.4);
  double C = 0;
  for (double t : {1.05, 2.0, 10.0}) {
    const double r = t * a * far.eps_alpha();
    C = std::max(C, (corrector_eval(far, r * dir) - Mat3::Identity()).norm() * r / far.eps_alpha());
  }
  for (double eps : {0.05, 0.025}) {
    const CorrectorField w({Vec3::Zero()}, eps, alpha, {eta}, a);
    for (double t : {1.05, 2.0, 10.0}) {
      const double r = t * a * w.eps_alpha();
      if (r > eta / 4) continue;
      CHECK((corrector_eval(w, r * dir) - Mat3::Identity()).norm() * r / w.eps_alpha() <= C * (1 + 1e-9));
    }
  }
  const double l2 = corrector_norm(far, CorrectorQuantity::kWMinusId, 2, 0);
  CHECK(l2 > 0.0);
  CHECK(std::isfinite(corrector_norm(far, CorrectorQuantity::kGradient, 2, 0)));
  CHECK_THROWS(corrector_norm(far, CorrectorQuantity::kWMinusId, 2, 1));
}

TEST_CASE("corrector rejects overlapping holes") {
  CHECK_THROWS_AS(CorrectorField({Vec3::Zero()}, 0.1, 2.5, {1e-5}, 0.125), DomainError);
}

TEST_CASE("BEM resistance") {
  const auto s = resistance_bem_sphere(0.125, 3);
  CHECK(std::abs(s.R.trace() / 3 / (6 * pi * 0.125) - 1) < 0.02);
  CHECK((s.R - s.R.transpose()).norm() < 1e-10 * s.R.norm());

  // rotating the mesh conjugates R
  auto mesh = ReferenceParticle::sphere(0.125).surface(2);
  for (auto& v : mesh.vertices) v = Vec3(v.x(), 1.6 * v.y(), 0.8 * v.z());
  const auto R0 = resistance_bem_mesh(mesh).R;
  const Mat3 Q = Eigen::AngleAxisd(0.7, Vec3(1, 2, 3).normalized()).toRotationMatrix();
  for (auto& v : mesh.vertices) v = Q * v;
  const auto R1 = resistance_bem_mesh(mesh).R;
  CHECK((R1 - Q * R0 * Q.transpose()).norm() < 0.01 * R0.norm());

  CHECK_THROWS_AS(resistance_bem_sphere(1.0, 2, 1e-6), DomainError);
  CHECK_THROWS(resistance_bem_sphere(-1.0, 2));
}

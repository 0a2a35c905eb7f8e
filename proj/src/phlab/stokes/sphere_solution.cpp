#include "phlab/stokes/sphere_solution.hpp"

#include <cmath>

#include "phlab/common/error.hpp"

namespace phlab {

SphereStokesSolution::SphereStokesSolution(double radius) : a_(radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("sphere solution: radius must be positive");
}

SphereStokesValue SphereStokesSolution::eval(int k, const Vec3& y) const {
  if (k < 0 || k > 2) throw InvalidArgument("sphere solution: axis must be 0, 1 or 2");
  const double r = y.norm();
  if (!(r >= a_ * (1.0 - 1e-12))) throw DomainError("sphere solution: point inside the sphere");
  const Vec3 n = y / r;
  const double a = a_, a3 = a * a * a;
  const double r2 = r * r, r3 = r2 * r, r4 = r2 * r2;
  const double A = 0.75 * a / r + 0.25 * a3 / r3;
  const double B = 0.75 * a / r - 0.75 * a3 / r3;
  const double dA = -0.75 * a / r2 - 0.75 * a3 / r4;
  const double dB = -0.75 * a / r2 + 2.25 * a3 / r4;
  const double nk = n[k];

  SphereStokesValue v;
  v.velocity = B * nk * n;
  v.velocity[k] += A;
  v.pressure = 1.5 * a * nk / r2;

  const Mat3 I = Mat3::Identity();
  const Mat3 nn = n * n.transpose();
  Mat3 g = dB * nk * nn;
  g.row(k) += dA * n.transpose();
  // d/dy_j [(e_k . n) n_i] = ((delta_kj - n_k n_j) n_i + n_k (delta_ij - n_i n_j)) / r
  Mat3 dnn = nk * (I - nn);
  Vec3 ek = Vec3::Zero();
  ek[k] = 1.0;
  dnn += n * (ek - nk * n).transpose();
  g += (B / r) * dnn;
  v.gradient = g;
  v.stress = v.pressure * I - g;
  return v;
}

Vec3 SphereStokesSolution::vector_potential(int k, const Vec3& y) const {
  const double r = y.norm();
  Vec3 ek = Vec3::Zero();
  ek[k] = 1.0;
  return potential_d1(r) * (y / r).cross(ek);
}

SphereStokesValue sphere_stokes_eval(double a, int k, const Vec3& y) {
  return SphereStokesSolution(a).eval(k, y);
}

}  // namespace phlab

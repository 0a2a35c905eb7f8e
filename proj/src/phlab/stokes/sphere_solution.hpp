#pragma once

#include "phlab/geometry/types.hpp"

namespace phlab {

/// Value of the decaying exterior Stokes solution (unit viscosity) around the
/// sphere |y| = a with velocity e_k on the sphere.
struct SphereStokesValue {
  Vec3 velocity;
  double pressure;
  Mat3 gradient;  // gradient(i, j) = d w_i / d y_j
  Mat3 stress;    // pressure * I - gradient; stress * n is the traction
};

/// Closed-form translating-sphere flow:
///   w = A(r) e_k + B(r) (e_k . n) n,  p = (3a/2) (e_k . n) / r^2,
///   A = 3a/(4r) + a^3/(4r^3),  B = 3a/(4r) - 3a^3/(4r^3).
/// It is the double curl of f(r) e_k with f'(r) = -3a/4 + a^3/(4 r^2), so
/// w = curl(f'(r) n x e_k).
class SphereStokesSolution {
 public:
  explicit SphereStokesSolution(double radius);

  double radius() const { return a_; }

  /// Throws DomainError for |y| < a (beyond a 1e-12 relative slack).
  SphereStokesValue eval(int k, const Vec3& y) const;

  /// Radial profile of the vector potential, f'(r) and f''(r).
  double potential_d1(double r) const { return -0.75 * a_ + 0.25 * a_ * a_ * a_ / (r * r); }
  double potential_d2(double r) const { return -0.5 * a_ * a_ * a_ / (r * r * r); }

  /// Vector potential f'(|y|) n x e_k; its curl is the velocity.
  Vec3 vector_potential(int k, const Vec3& y) const;

 private:
  double a_;
};

/// Free-function form of SphereStokesSolution(a).eval(k, y).
SphereStokesValue sphere_stokes_eval(double a, int k, const Vec3& y);

}  // namespace phlab

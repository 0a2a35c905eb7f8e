#include "phlab/geometry/particle.hpp"

#include <cmath>

#include "phlab/common/error.hpp"

namespace phlab {

void validate_closed_mesh(const SurfaceMesh& mesh) {
  if (!is_closed_consistently_oriented(mesh))
    throw DomainError("mesh: not watertight or not consistently oriented");
  if (!(signed_volume(mesh) > 0.0)) throw DomainError("mesh: faces are not outward oriented");
  const double w = winding_number(mesh, Vec3::Zero());
  const double scale = max_vertex_norm(mesh);
  if (std::abs(w - 1.0) > 1e-6 || !(distance_to_surface(mesh, Vec3::Zero()) > 1e-12 * scale))
    throw DomainError("mesh: origin is not strictly inside the surface");
}

ReferenceParticle ReferenceParticle::sphere(double radius) {
  if (!(radius > 0.0)) throw DomainError("particle: sphere radius must be > 0");
  if (!(radius < kContainmentRadius)) throw DomainError("particle: sphere radius must be < 1/4");
  ReferenceParticle p;
  p.radius_ = radius;
  return p;
}

ReferenceParticle ReferenceParticle::from_mesh(SurfaceMesh mesh) {
  validate_closed_mesh(mesh);
  const double r = max_vertex_norm(mesh);
  if (!(r < kContainmentRadius)) throw DomainError("particle: mesh not contained in the ball of radius 1/4");
  ReferenceParticle p;
  p.radius_ = r;
  p.mesh_ = std::move(mesh);
  return p;
}

SurfaceMesh ReferenceParticle::surface(int level) const {
  if (is_sphere()) return icosphere(level, radius_);
  if (level < 0 || level > 6) throw InvalidArgument("particle: subdivision level must be in [0, 6]");
  SurfaceMesh m = *mesh_;
  for (int l = 0; l < level; ++l) m = subdivide(m);
  return m;
}

}  // namespace phlab

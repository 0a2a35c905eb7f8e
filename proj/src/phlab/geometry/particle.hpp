#pragma once

#include <optional>

#include "phlab/geometry/mesh.hpp"

namespace phlab {

/// Reference particle T, compactly contained in the ball of radius 1/4 with
/// the origin in its interior. Either a sphere or a closed triangle mesh.
class ReferenceParticle {
 public:
  static constexpr double kDefaultRadius = 0.125;
  static constexpr double kContainmentRadius = 0.25;

  static ReferenceParticle sphere(double radius = kDefaultRadius);
  /// Validates closedness, outward orientation, containment and that the
  /// origin is strictly inside; throws DomainError otherwise.
  static ReferenceParticle from_mesh(SurfaceMesh mesh);

  bool is_sphere() const { return !mesh_.has_value(); }
  /// Sphere radius, or the max vertex norm for a mesh.
  double radius() const { return radius_; }
  const SurfaceMesh& mesh() const { return *mesh_; }

  /// Surface discretization: icosphere of the given level for a sphere, the
  /// mesh subdivided `level` times otherwise.
  SurfaceMesh surface(int level) const;

 private:
  ReferenceParticle() = default;
  double radius_ = kDefaultRadius;
  std::optional<SurfaceMesh> mesh_;
};

/// Checks a mesh for use as a closed body: throws DomainError naming the
/// failed property (closed/oriented, outward, origin inside).
void validate_closed_mesh(const SurfaceMesh& mesh);

}  // namespace phlab

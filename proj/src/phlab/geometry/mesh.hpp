#pragma once

#include <array>
#include <filesystem>
#include <vector>

#include "phlab/geometry/types.hpp"

namespace phlab {

struct SurfaceMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
};

/// Icosahedron subdivided `level` times, vertices projected to the sphere.
/// 10 * 4^level + 2 vertices; faces counter-clockwise seen from outside.
SurfaceMesh icosphere(int level, double radius = 1.0, const Vec3& center = Vec3::Zero());

/// Midpoint subdivision (each triangle into four), without smoothing.
SurfaceMesh subdivide(const SurfaceMesh& mesh);

/// Reads ASCII OFF or OBJ (chosen by extension, falling back to the "OFF" magic).
SurfaceMesh read_mesh(const std::filesystem::path& path);
void write_off(const SurfaceMesh& mesh, const std::filesystem::path& path);

/// Every directed edge appears exactly once and its reverse exactly once.
bool is_closed_consistently_oriented(const SurfaceMesh& mesh);
/// Generalized winding number of the surface about p (solid angle / 4 pi).
double winding_number(const SurfaceMesh& mesh, const Vec3& p);
double signed_volume(const SurfaceMesh& mesh);
double max_vertex_norm(const SurfaceMesh& mesh);
double mean_edge_length(const SurfaceMesh& mesh);
/// Euclidean distance from p to the surface.
double distance_to_surface(const SurfaceMesh& mesh, const Vec3& p);

/// Applies x -> R x to every vertex.
SurfaceMesh rotated(const SurfaceMesh& mesh, const Mat3& rotation);

}  // namespace phlab

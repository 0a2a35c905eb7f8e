#pragma once

#include <optional>
#include <vector>

#include "phlab/geometry/mesh.hpp"
#include "phlab/geometry/particle.hpp"
#include "phlab/geometry/types.hpp"

namespace phlab {

struct ResistanceLevel {
  int level;
  std::size_t vertices;
  double mesh_spacing;  // mean edge length h
  double reg_eps;
  Mat3 R;
};

struct ResistanceResult {
  Mat3 R;  // column k: total force for unit velocity e_k
  std::size_t vertices = 0;
  std::size_t faces = 0;
  double mesh_spacing = 0.0;
  double reg_eps = 0.0;
  std::vector<ResistanceLevel> history;  // coarse to fine, last entry is R
};

/// Default blob size relative to the mesh spacing.
inline constexpr double kDefaultRegFactor = 0.5;

/// Translational resistance of a closed surface by regularized-Stokeslet
/// collocation at the vertices (blob kernel of Cortez et al., unit viscosity):
///   U(x_i) = sum_j S_eps(x_i - x_j) f_j / (8 pi),
///   S_eps(x) = ((|x|^2 + 2 eps^2) I + x x^T) / (|x|^2 + eps^2)^{3/2}.
/// The matrix is symmetric positive definite and factored in place by
/// Cholesky. `reg_eps` must lie in (0.1 h, 10 h); default 0.5 h.
ResistanceResult resistance_bem_mesh(const SurfaceMesh& mesh, std::optional<double> reg_eps = std::nullopt,
                                     unsigned threads = 0);

/// Solves on particle.surface(l) for l = max(level - 2, 0) .. level, with the
/// blob size a fixed multiple of h across levels. Throws NumericalError when
/// the refinement does not settle (successive changes grow and the last one
/// exceeds 5%).
ResistanceResult resistance_bem(const ReferenceParticle& particle, int level,
                                std::optional<double> reg_eps = std::nullopt, unsigned threads = 0);

/// Same for a sphere of any radius (icosphere surfaces), used for the
/// unit-sphere Stokes-law check where the particle containment rule does not
/// apply.
ResistanceResult resistance_bem_sphere(double radius, int level, std::optional<double> reg_eps = std::nullopt,
                                       unsigned threads = 0);

}  // namespace phlab

#pragma once

#include <cstddef>
#include <span>

#include "phlab/geometry/configuration.hpp"

namespace phlab {

/// Event A_{L, alpha_thresh}: min_i d_i >= 2 L eps^alpha_thresh. Vacuous for N = 1.
bool indicator_A(const ParticleConfiguration& config, double L, double alpha_thresh);

/// Largest number of points that fit in one half-open cube [a, a+s)^3, i.e.
/// the largest subset whose coordinate ranges are all < s. This is the
/// essential sup of the cover multiplicity of the cubes of side s centered at
/// the points. "v in [a, a+s)" is evaluated as (v >= a && v - a < s).
std::size_t max_cube_multiplicity(std::span<const Vec3> points, double side);

/// ||rho_bar||_inf for the smeared density with cubes of side eps^{1-lambda}.
double smeared_density_sup(const ParticleConfiguration& config, double lambda);

/// Event B_lambda: smeared_density_sup <= 16 ||rho||_inf.
bool indicator_B(const ParticleConfiguration& config, double lambda, double rho_sup);

/// Cube side eps^{1-lambda} of the smeared density.
double smeared_cube_side(double eps, double lambda);

}  // namespace phlab

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "phlab/geometry/types.hpp"

// Reference implementations for cross-checking the core. Slow by design and
// sharing no code with the routines they check.
namespace phlab::oracle {

/// Squared W2 between two uniform clouds of equal size by enumerating all
/// n! assignments. n <= 8.
double w2_squared_permutations(std::span<const Vec3> x, std::span<const Vec3> y);

/// Minimum-cost perfect matching on a square cost matrix (row-major n x n),
/// Hungarian method with potentials, O(n^3). Returns the optimal total cost
/// and writes the column matched to each row.
double hungarian(const std::vector<double>& cost, std::size_t n, std::vector<std::size_t>* match = nullptr);

/// Squared W2 between uniform clouds of equal size via hungarian().
double w2_squared_hungarian(std::span<const Vec3> x, std::span<const Vec3> y);

/// Squared W2 between uniform clouds of sizes n and k n: each x_i is
/// replicated k times and the square problem solved by hungarian().
double w2_squared_replicated(std::span<const Vec3> x, std::span<const Vec3> y);

/// All-pairs nearest-neighbour distances, O(n^2).
std::vector<double> nn_distances(std::span<const Vec3> points);

/// Largest number of points inside one half-open cube [a, a + s)^3, trying
/// every corner built from the points' own coordinates. O(n^4).
std::size_t cube_multiplicity(std::span<const Vec3> points, double side);

/// ||f||_{H^-1} of f(x) = A sin(2 pi k.x / L) on the periodic cube of side
/// L, in closed form: A (L^3 / 2 / (1 + |2 pi k / L|^2))^{1/2}.
double single_mode_hneg1(double amplitude, const Vec3& k, double side);

/// Total force on the sphere |y| = R for the decaying Stokes solution with
/// unit velocity e_k on |y| = a: integral of sigma n over the sphere,
/// midpoint rule in (cos theta, phi) with m x 2m cells.
Vec3 sphere_traction(double a, int k, double R, int m);

}  // namespace phlab::oracle

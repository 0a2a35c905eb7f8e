#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace phlab {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre rule with n points on [lo, hi], 1 <= n <= 256.
QuadratureRule gauss_legendre(int n, double lo = -1.0, double hi = 1.0);

struct SphereNode {
  Eigen::Vector3d direction;  // unit normal
  double weight;              // weights sum to 1 (normalized surface measure)
};

/// Product rule on the unit sphere: Gauss-Legendre in cos(theta) times the
/// trapezoidal rule in phi. Exact for spherical polynomials of degree < 2*n_theta
/// when n_phi >= 2*n_theta.
std::vector<SphereNode> sphere_rule(int n_theta, int n_phi);

}  // namespace phlab

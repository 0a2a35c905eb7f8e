#include "phlab/common/quadrature.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/legendre.hpp>

#include "phlab/common/error.hpp"

namespace phlab {

QuadratureRule gauss_legendre(int n, double lo, double hi) {
  if (n < 1 || n > 256) throw InvalidArgument("gauss_legendre: order must be in [1, 256]");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  for (int i = 0; i < n; ++i) {
    // Newton iteration from the Tricomi initial guess; roots are ordered ascending.
    double x = -std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const double p = boost::math::legendre_p(n, x);
      const double dp = boost::math::legendre_p_prime(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = boost::math::legendre_p_prime(n, x);
    rule.nodes[i] = mid + half * x;
    rule.weights[i] = half * 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

std::vector<SphereNode> sphere_rule(int n_theta, int n_phi) {
  const QuadratureRule mu = gauss_legendre(n_theta, -1.0, 1.0);
  std::vector<SphereNode> out;
  out.reserve(static_cast<std::size_t>(n_theta) * n_phi);
  for (int i = 0; i < n_theta; ++i) {
    const double c = mu.nodes[i];
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    for (int j = 0; j < n_phi; ++j) {
      const double phi = 2.0 * std::numbers::pi * (j + 0.5) / n_phi;
      out.push_back({Eigen::Vector3d(s * std::cos(phi), s * std::sin(phi), c),
                     0.5 * mu.weights[i] / n_phi});
    }
  }
  return out;
}

}  // namespace phlab

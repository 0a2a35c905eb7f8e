#pragma once

#include <utility>
#include <vector>

namespace phlab {

/// Least-squares line through (log scale, log value).
struct RateFit {
  std::vector<double> log_x, log_y;
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double slope_ci_low = 0.0;  // 95% two-sided, Student t with n-2 dof
  double slope_ci_high = 0.0;
  double r_squared = 1.0;
};

/// Fits value ~ C * scale^slope. Needs at least 3 pairs with positive
/// scales and values and at least two distinct scales.
RateFit fit_power_law(const std::vector<std::pair<double, double>>& pairs);

}  // namespace phlab

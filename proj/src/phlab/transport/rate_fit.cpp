#include "phlab/transport/rate_fit.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/students_t.hpp>

#include "phlab/common/error.hpp"

namespace phlab {

RateFit fit_power_law(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 3) throw InvalidArgument("fit_power_law: need at least 3 points");
  RateFit f;
  for (const auto& [s, v] : pairs) {
    if (!(s > 0.0) || !(v > 0.0) || !std::isfinite(s) || !std::isfinite(v))
      throw DomainError("fit_power_law: scales and values must be positive and finite");
    f.log_x.push_back(std::log(s));
    f.log_y.push_back(std::log(v));
  }
  const double n = static_cast<double>(pairs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) mx += f.log_x[i], my += f.log_y[i];
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double dx = f.log_x[i] - mx, dy = f.log_y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw DomainError("fit_power_law: scales must not all coincide");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double r = f.log_y[i] - (f.intercept + f.slope * f.log_x[i]);
    sse += r * r;
  }
  f.r_squared = syy > 0.0 ? std::max(0.0, 1.0 - sse / syy) : 1.0;
  f.slope_se = std::sqrt(sse / (n - 2.0) / sxx);
  const boost::math::students_t dist(n - 2.0);
  const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
  f.slope_ci_low = f.slope - t * f.slope_se;
  f.slope_ci_high = f.slope + t * f.slope_se;
  return f;
}

}  // namespace phlab

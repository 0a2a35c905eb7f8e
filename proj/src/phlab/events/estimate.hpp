#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "phlab/geometry/configuration.hpp"

namespace phlab {

/// 95% two-sided normal quantile.
inline constexpr double kZ95 = 1.959963984540054;

struct EventEstimate {
  std::size_t trials = 0;
  std::size_t successes = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double ci_width() const { return ci_high - ci_low; }
};

/// Wilson score interval at 95%.
EventEstimate wilson_estimate(std::size_t successes, std::size_t trials);

using ConfigurationEvent = std::function<bool(const ParticleConfiguration&)>;

/// Fraction of `trials` independent configurations (N i.i.d. points from
/// `density`) for which `event` holds. Trial t draws from the stream
/// derived from (seed, t), so the result does not depend on `threads`.
EventEstimate estimate_event_probability(const ConfigurationEvent& event, const DensityModel& density,
                                         std::size_t n, std::size_t trials, std::uint64_t seed,
                                         double alpha = 2.5, unsigned threads = 0);

}  // namespace phlab

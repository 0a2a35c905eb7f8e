#include "phlab/events/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "phlab/common/error.hpp"
#include "phlab/common/parallel.hpp"

namespace phlab {

EventEstimate wilson_estimate(std::size_t successes, std::size_t trials) {
  if (trials == 0) throw InvalidArgument("wilson: trials must be positive");
  if (successes > trials) throw InvalidArgument("wilson: successes exceed trials");
  EventEstimate e;
  e.trials = trials;
  e.successes = successes;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = kZ95 / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  e.p_hat = p;
  e.ci_low = std::min(std::max(0.0, center - half), p);
  e.ci_high = std::max(std::min(1.0, center + half), p);
  return e;
}

EventEstimate estimate_event_probability(const ConfigurationEvent& event, const DensityModel& density,
                                         std::size_t n, std::size_t trials, std::uint64_t seed, double alpha,
                                         unsigned threads) {
  if (trials < 30) throw InvalidArgument("estimate_event_probability: trials must be >= 30");
  if (n == 0) throw InvalidArgument("estimate_event_probability: N must be >= 1");
  std::vector<char> hit(trials, 0);
  parallel_for(trials, threads, [&](std::size_t t) {
    RandomStream rng = RandomStream::derive(seed, {t});
    const ParticleConfiguration config = sample_configuration(density, n, rng, alpha);
    hit[t] = event(config) ? 1 : 0;
  });
  std::size_t k = 0;
  for (char h : hit) k += static_cast<std::size_t>(h);
  return wilson_estimate(k, trials);
}

}  // namespace phlab

#include "phlab/transport/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "phlab/common/error.hpp"
#include "phlab/geometry/neighbors.hpp"
#include "phlab/transport/network_simplex.hpp"

namespace phlab {

namespace {

constexpr double kWeightTol = 1e-12;
// Candidate arcs per node in the initial sparse graph.
constexpr std::size_t kInitialNeighbors = 8;
// Violated arcs added per source in each verification sweep.
constexpr std::size_t kAddPerSource = 8;
// Below this many pairs the complete bipartite graph is used directly.
constexpr std::size_t kDensePairs = 1u << 16;

bool all_equal(const std::vector<double>& w) {
  return std::all_of(w.begin(), w.end(), [&](double v) { return v == w.front(); });
}

void check_weights(const std::vector<double>& w, const char* what) {
  double total = 0.0;
  for (double v : w) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(what) + ": weights must be finite and >= 0");
    total += v;
  }
  if (!(total > 0.0)) throw InvalidArgument(std::string(what) + ": weights sum to zero");
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<Vec3> points, std::vector<double> weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.empty()) throw InvalidArgument("measure: no points");
  if (points_.size() != weights_.size()) throw InvalidArgument("measure: point and weight counts differ");
  for (const Vec3& p : points_)
    if (!p.allFinite()) throw InvalidArgument("measure: non-finite point");
  check_weights(weights_, "measure");
  const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  if (std::abs(total - 1.0) > kWeightTol) throw InvalidArgument("measure: weights must sum to 1");
  uniform_ = all_equal(weights_);
}

DiscreteMeasure DiscreteMeasure::uniform(std::vector<Vec3> points) {
  const std::size_t n = points.size();
  if (n == 0) throw InvalidArgument("measure: no points");
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  DiscreteMeasure m(std::move(points), std::move(w));
  m.uniform_ = true;
  return m;
}

TransportResult solve_transport(const std::vector<Vec3>& x, const std::vector<double>& a,
                                const std::vector<Vec3>& y, const std::vector<double>& b) {
  const std::size_t n = x.size(), m = y.size();
  if (n == 0 || m == 0) throw InvalidArgument("transport: empty point set");
  if (a.size() != n || b.size() != m) throw InvalidArgument("transport: weight count mismatch");
  check_weights(a, "transport");
  check_weights(b, "transport");

  // Uniform marginals become integer supplies m/g and n/g, which keeps every
  // flow exact.
  std::vector<double> supply(n + m);
  double total;
  if (all_equal(a) && all_equal(b)) {
    const std::size_t g = std::gcd(n, m);
    const double sa = static_cast<double>(m / g), sb = static_cast<double>(n / g);
    for (std::size_t i = 0; i < n; ++i) supply[i] = sa;
    for (std::size_t j = 0; j < m; ++j) supply[n + j] = -sb;
    total = sa * static_cast<double>(n);
  } else {
    const double ta = std::accumulate(a.begin(), a.end(), 0.0);
    const double tb = std::accumulate(b.begin(), b.end(), 0.0);
    if (std::abs(ta - tb) > kWeightTol * std::max(ta, tb)) throw InvalidArgument("transport: weight mismatch between marginals");
    for (std::size_t i = 0; i < n; ++i) supply[i] = a[i];
    for (std::size_t j = 0; j < m; ++j) supply[n + j] = -b[j];
    total = ta;
  }

  Vec3 lo = x[0], hi = x[0];
  for (const Vec3& p : x) lo = lo.cwiseMin(p), hi = hi.cwiseMax(p);
  for (const Vec3& p : y) lo = lo.cwiseMin(p), hi = hi.cwiseMax(p);
  double cmax = (hi - lo).squaredNorm();
  if (!(cmax > 0.0)) cmax = 1.0;
  const double art = cmax * static_cast<double>(n + m + 1);
  const double tol = 1e-10 * cmax;

  auto cost = [&](std::size_t i, std::size_t j) { return (x[i] - y[j]).squaredNorm(); };

  NetworkSimplex ns(std::move(supply), art, tol);
  const int off = static_cast<int>(n);
  if (n * m <= kDensePairs) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) ns.add_arc(static_cast<int>(i), off + static_cast<int>(j), cost(i, j));
  } else {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    const auto fwd = k_nearest(y, x, std::min(m, kInitialNeighbors), false);
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& [d, j] : fwd[i]) pairs.emplace_back(i, j);
    const auto bwd = k_nearest(x, y, std::min(n, kInitialNeighbors), false);
    for (std::size_t j = 0; j < m; ++j)
      for (const auto& [d, i] : bwd[j]) pairs.emplace_back(i, j);
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    for (const auto& [i, j] : pairs) ns.add_arc(static_cast<int>(i), off + static_cast<int>(j), cost(i, j));
  }

  const bool sparse = n * m > kDensePairs;
  std::vector<char> present;
  if (sparse) {
    present.assign(n * m, 0);
    for (std::size_t e = 0; e < ns.arc_count(); ++e)
      present[static_cast<std::size_t>(ns.arc_source(e)) * m + (ns.arc_target(e) - off)] = 1;
  }
  for (;;) {
    ns.solve();
    ns.refresh_potentials();
    if (!sparse) break;
    // Price every pair against the current duals.
    const auto& pi = ns.potentials();
    std::size_t added = 0;
    std::vector<std::pair<double, std::size_t>> worst;
    for (std::size_t i = 0; i < n; ++i) {
      worst.clear();
      for (std::size_t j = 0; j < m; ++j) {
        if (present[i * m + j]) continue;
        const double rc = cost(i, j) + pi[i] - pi[n + j];
        if (rc < -tol) worst.emplace_back(rc, j);
      }
      if (worst.size() > kAddPerSource) {
        std::nth_element(worst.begin(), worst.begin() + kAddPerSource, worst.end());
        worst.resize(kAddPerSource);
      }
      for (const auto& [rc, j] : worst) {
        ns.add_arc(static_cast<int>(i), off + static_cast<int>(j), cost(i, j));
        present[i * m + j] = 1;
        ++added;
      }
    }
    if (added == 0) break;
  }

  if (ns.artificial_flow() > 1e-9 * total) throw NumericalError("transport: no feasible plan found");

  TransportResult r;
  r.pivots = ns.pivots();
  r.arcs = ns.arc_count();
  double c = 0.0;
  for (std::size_t e = 0; e < ns.arc_count(); ++e) {
    const double f = ns.flow(e);
    if (f <= 0.0) continue;
    const std::size_t i = static_cast<std::size_t>(ns.arc_source(e));
    const std::size_t j = static_cast<std::size_t>(ns.arc_target(e) - off);
    r.plan.push_back({i, j, f / total});
    c += f * ns.arc_cost(e);
  }
  r.cost = c / total;
  std::sort(r.plan.begin(), r.plan.end(), [](const PlanEntry& p, const PlanEntry& q) {
    return p.i != q.i ? p.i < q.i : p.j < q.j;
  });
  return r;
}

double w2_assignment(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const TransportLimits& limits) {
  const std::size_t n = mu.size(), m = nu.size();
  if (mu.is_uniform() && nu.is_uniform() && n == m) {
    if (n > limits.max_uniform)
      throw SizeCapError("w2_assignment: n = " + std::to_string(n) + " exceeds cap " + std::to_string(limits.max_uniform));
  } else if (std::max(n, m) > limits.max_general) {
    throw SizeCapError("w2_assignment: general measures limited to " + std::to_string(limits.max_general) + " points");
  }
  const TransportResult r = solve_transport(mu.points(), mu.weights(), nu.points(), nu.weights());
  return std::sqrt(std::max(r.cost, 0.0));
}

SmearedPlanCost w2_plan_cost_smeared(const ParticleConfiguration& config, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("w2_plan_cost_smeared: lambda must lie in (0, 1)");
  SmearedPlanCost out{};
  const double s = std::pow(config.eps(), 1.0 - lambda);
  out.cube_side = s;
  out.bound = std::sqrt(3.0) * s;
  // Per cube: E|Y - x_i|^2 = 3 * s^2 / 12 for Y uniform on x_i + [-s/2, s/2]^3.
  const double n = static_cast<double>(config.size());
  double second_moment = 0.0;
  double first_marginal = 0.0, second_marginal = 0.0;
  const double cube_mass = 1.0 / n;
  const double cube_density = cube_mass / (s * s * s);
  for (std::size_t i = 0; i < config.size(); ++i) {
    second_moment += cube_mass * (3.0 * s * s / 12.0);
    first_marginal += cube_mass;                    // atom at x_i
    second_marginal += cube_density * (s * s * s);  // smeared cube mass
  }
  out.plan_cost = std::sqrt(second_moment);
  out.admissible = std::abs(first_marginal - 1.0) <= 1e-12 * n && std::abs(second_marginal - 1.0) <= 1e-12 * n;
  return out;
}

double w2_empirical_vs_density(const DensityModel& density, const ParticleConfiguration& config,
                               std::size_t ref_samples, std::uint64_t seed) {
  const std::size_t n = config.size();
  if (n > kEmpiricalMaxN)
    throw SizeCapError("w2_empirical_vs_density: N = " + std::to_string(n) + " exceeds cap " + std::to_string(kEmpiricalMaxN));
  if (ref_samples < n) throw InvalidArgument("w2_empirical_vs_density: ref_samples must be >= N");
  const std::size_t ref = ref_samples / n * n;
  if (ref > kEmpiricalMaxRef)
    throw SizeCapError("w2_empirical_vs_density: ref_samples exceeds cap " + std::to_string(kEmpiricalMaxRef));
  const ParticleConfiguration sample = sample_configuration(density, ref, seed, config.alpha());
  const std::vector<double> a(n, 1.0 / static_cast<double>(n));
  const std::vector<double> b(ref, 1.0 / static_cast<double>(ref));
  const TransportResult r = solve_transport(config.centers(), a, sample.centers(), b);
  return std::sqrt(std::max(r.cost, 0.0));
}

}  // namespace phlab

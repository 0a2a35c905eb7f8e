#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "phlab/geometry/configuration.hpp"
#include "phlab/geometry/density.hpp"
#include "phlab/geometry/types.hpp"

namespace phlab {

/// Weighted point cloud; weights are nonnegative and sum to 1 (+-1e-12).
class DiscreteMeasure {
 public:
  DiscreteMeasure(std::vector<Vec3> points, std::vector<double> weights);
  static DiscreteMeasure uniform(std::vector<Vec3> points);

  std::size_t size() const { return points_.size(); }
  const std::vector<Vec3>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }
  /// All weights bitwise equal to 1/n.
  bool is_uniform() const { return uniform_; }

 private:
  std::vector<Vec3> points_;
  std::vector<double> weights_;
  bool uniform_ = false;
};

struct TransportLimits {
  std::size_t max_uniform = 4096;  // equal-count uniform measures
  std::size_t max_general = 512;   // arbitrary weights
};

/// Entry of an optimal plan: mass moved from source i to target j.
struct PlanEntry {
  std::size_t i, j;
  double mass;
};

struct TransportResult {
  double cost = 0.0;  // sum of mass * |x_i - y_j|^2, masses normalized to 1
  std::vector<PlanEntry> plan;
  std::size_t pivots = 0;
  std::size_t arcs = 0;  // candidate arcs used by the final solve
};

/// Exact discrete transport between sum_i a_i delta_{x_i} and
/// sum_j b_j delta_{y_j} (sum a = sum b) with squared Euclidean cost.
///
/// Solved by network simplex on a sparse candidate arc set (k nearest
/// neighbours in both directions); the duals are then checked against every
/// pair and violated arcs added until none remain, so the result is optimal
/// for the complete bipartite problem.
TransportResult solve_transport(const std::vector<Vec3>& x, const std::vector<double>& a,
                                const std::vector<Vec3>& y, const std::vector<double>& b);

/// W2 between two measures. Uniform measures of equal size up to
/// limits.max_uniform, otherwise up to limits.max_general points each.
double w2_assignment(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const TransportLimits& limits = {});

struct SmearedPlanCost {
  double plan_cost;   // RMS displacement of the centre-to-cube plan
  double bound;       // sqrt(3) eps^{1-lambda}
  double cube_side;   // eps^{1-lambda}
  bool admissible;    // marginals checked cube by cube
};

/// Cost of the plan sending each atom x_i (mass 1/N) uniformly onto the cube
/// of side eps^{1-lambda} centred at x_i. The second moment of a uniform cube
/// about its centre is 3 s^2 / 12, so the cost is s / 2 regardless of the
/// positions.
SmearedPlanCost w2_plan_cost_smeared(const ParticleConfiguration& config, double lambda);

/// Surrogate for W2(rho_eps, rho): exact W2 between the centres and an i.i.d.
/// sample of `density` of size ref_samples (rounded down to a multiple of N,
/// each centre carrying ref/N copies). The reference sample is drawn exactly
/// like sample_configuration(density, ref, seed), so ref = N with the seed of
/// the configuration gives 0.
///
/// Biased upwards: the reference sample's own distance to rho adds in
/// expectation.
double w2_empirical_vs_density(const DensityModel& density, const ParticleConfiguration& config,
                               std::size_t ref_samples, std::uint64_t seed);

/// Largest N accepted by w2_empirical_vs_density.
inline constexpr std::size_t kEmpiricalMaxN = 2048;
/// Largest reference sample accepted by w2_empirical_vs_density.
inline constexpr std::size_t kEmpiricalMaxRef = 16 * kEmpiricalMaxN;

}  // namespace phlab

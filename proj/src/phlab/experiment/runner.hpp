#pragma once

#include "phlab/experiment/config.hpp"
#include "phlab/experiment/report.hpp"

namespace phlab {

/// Runs the pipeline named by config.kind over the N list. Replicate t of
/// the j-th N draws from streams derived from (seed, j, t) and results are
/// merged in index order, so the report does not depend on `threads`.
/// Validates first (ValidationError on failure).
ScalingReport run_experiment(const ExperimentConfig& config, unsigned threads = 0);

/// Independent 64-bit seed for a sub-computation, derived from a stream path.
std::uint64_t sub_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

}  // namespace phlab

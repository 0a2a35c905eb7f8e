#pragma once

#include "phlab/experiment/config.hpp"
#include "phlab/experiment/report.hpp"

namespace phlab {

/// Brute-force cross-checks for the operations behind config.kind, on small
/// instances drawn from the config's density and seed. Each row holds a
/// discrepancy (value) and its tolerance (bound); each comparison is also a
/// check. Sizes are capped so the whole suite runs in seconds.
ScalingReport run_oracles(const ExperimentConfig& config, unsigned threads = 0);

}  // namespace phlab

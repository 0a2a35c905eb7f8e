#pragma once

#include <vector>

#include "phlab/geometry/configuration.hpp"

namespace phlab {

/// Per-particle truncation radii eta_i = min(m_eta eps^beta, d_i).
struct TruncationScales {
  double beta = 1.0;
  double m_eta = 1.0;
  std::vector<double> eta;
};

/// Throws DomainError unless 1 <= beta <= alpha, 0 < m_eta <= 1, and
/// m_eta = 1 when beta = alpha.
void check_truncation_params(double alpha, double beta, double m_eta);

TruncationScales truncation_scales(const ParticleConfiguration& config, double beta, double m_eta);

}  // namespace phlab

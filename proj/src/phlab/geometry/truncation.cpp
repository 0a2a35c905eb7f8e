#include "phlab/geometry/truncation.hpp"

#include <algorithm>
#include <cmath>

#include "phlab/common/error.hpp"

namespace phlab {

void check_truncation_params(double alpha, double beta, double m_eta) {
  if (!(beta >= 1.0 && beta <= alpha)) throw DomainError("truncation: beta must satisfy 1 <= beta <= alpha");
  if (!(m_eta > 0.0 && m_eta <= 1.0)) throw DomainError("truncation: m_eta must lie in (0, 1]");
  if (beta == alpha && m_eta != 1.0) throw DomainError("truncation: m_eta must be 1 when beta = alpha");
}

TruncationScales truncation_scales(const ParticleConfiguration& config, double beta, double m_eta) {
  check_truncation_params(config.alpha(), beta, m_eta);
  TruncationScales s;
  s.beta = beta;
  s.m_eta = m_eta;
  const double cap = m_eta * std::pow(config.eps(), beta);
  const auto& d = config.nn_distances();
  s.eta.resize(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) s.eta[i] = std::min(cap, d[i]);
  return s;
}

}  // namespace phlab

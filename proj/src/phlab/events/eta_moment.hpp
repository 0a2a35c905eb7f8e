#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "phlab/geometry/density.hpp"

namespace phlab {

enum class EtaMode { kMonteCarlo, kLayerCake };

struct EtaMomentResult {
  double value = 0.0;
  double std_error = 0.0;  // 0 for the deterministic layer-cake route
  std::size_t trials = 0;
  bool exact_distribution = false;  // layer-cake used the closed-form box law
};

/// E[eta_1^kappa] with eta_1 = min(m_eta eps^beta, d_1), eps = N^{-1/3}.
///
/// Monte Carlo: sample mean over `trials` independent configurations.
/// Layer-cake: integral of P[eta^kappa >= t] over a geometric grid. For a
/// uniform box density P[d_1 > s] is evaluated from the exact law
/// E_x[(1 - |B(x,s) cap box| / |box|)^{N-1}]; for other densities from an
/// empirical CDF of d_1 drawn on streams disjoint from the Monte Carlo ones.
/// Requires -3 < kappa.
EtaMomentResult eta_moment(const DensityModel& density, std::size_t n, double beta, double m_eta, double kappa,
                           std::size_t trials, EtaMode mode, std::uint64_t seed, unsigned threads = 0);

/// eta_1 for `trials` independent configurations; trial t uses stream (seed, t).
std::vector<double> sample_eta(const DensityModel& density, std::size_t n, double beta, double m_eta,
                               std::size_t trials, std::uint64_t seed, unsigned threads = 0);

/// Mean and standard error of eta^kappa over precomputed samples.
EtaMomentResult eta_moment_from_samples(const std::vector<double>& eta, double kappa, double cap);

/// P[d_1 > s] for N i.i.d. uniform points in `box`, where d_1 is the distance
/// from the first point to its nearest neighbour. Valid for s <= min side / 2.
double uniform_box_nn_survival(const Box& box, std::size_t n, double s);

/// Volume of the unit ball cut by k = 0..3 orthogonal half-spaces
/// {y_d >= -tau_d}, tau_d in [0, 1].
double cut_ball_volume(int k, const double* tau);

}  // namespace phlab

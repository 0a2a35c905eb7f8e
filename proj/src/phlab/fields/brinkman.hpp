#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "phlab/fields/grid.hpp"
#include "phlab/geometry/configuration.hpp"
#include "phlab/geometry/density.hpp"
#include "phlab/geometry/particle.hpp"
#include "phlab/geometry/truncation.hpp"

namespace phlab {

/// Smooth vector test field psi with its gradient (gradient(i, j) = d psi_i / d x_j).
struct TestField {
  std::function<Vec3(const Vec3&)> value;
  std::function<Mat3(const Vec3&)> gradient;

  /// amplitude * exp(-|x - center|^2 / (2 sigma^2)).
  static TestField gaussian(const Vec3& center, double sigma, const Vec3& amplitude);
  static TestField constant(const Vec3& c);
};

/// Right-hand side of the M_eps estimate, without its constant.
struct BrinkmanBoundParts {
  double w2_term = 0.0;       // W2(rho_eps, rho) ||psi||_{H^1}
  double smear_term = 0.0;    // eps^{1-lambda} ||psi||_{H^1}
  double cube_h1_term = 0.0;  // sum eta_i^{-1/2} eps^3 ||psi||_{H^1(Q~_i)}
  double cube_l2_term = 0.0;  // sum eta_i^{-1} eps^alpha ||psi||_{L^2(Q_i)}
  double w2 = 0.0;
  double psi_h1 = 0.0;
  double sum() const { return w2_term + smear_term + cube_h1_term + cube_l2_term; }
};

struct BrinkmanGap {
  double gap = 0.0;       // Euclidean norm of the three column gaps
  Vec3 column_gap;        // <M_k, psi> - R_k . int rho psi
  Vec3 m_pairing;         // <M_k, psi>
  Vec3 rho_r_pairing;     // R_k . int rho psi
  BrinkmanBoundParts parts;
};

struct BrinkmanOptions {
  double lambda = 0.3;
  double particle_radius = ReferenceParticle::kDefaultRadius;
  /// W2(rho_eps, rho); computed by exact transport against an independent
  /// sample of size N when absent.
  std::optional<double> w2;
  std::uint64_t w2_seed = 0x5eed;
  unsigned threads = 0;
};

/// Pairing of M_eps - rho R against psi. For column k,
///   <M_k, psi> = eps^{3-alpha} sum_i ( int_{dB_{eta_i/4}} T_k n . psi dS
///                                    + int_{D_i} T_k : grad psi dx ),
/// where T_k = p~ I - grad w~ is the stress of the (blended) disturbance
/// flow around particle i. Both integrals use direct quadrature on the
/// sphere and annulus. The boundary term gamma_eps is not included: psi is
/// not required to vanish on the holes. ||psi||_{H^1(R^3)} is integrated
/// over `box`.
BrinkmanGap brinkman_gap_pairing(const ParticleConfiguration& config, const TruncationScales& scales,
                                 const Mat3& resistance, const DensityModel& density, const TestField& psi,
                                 const BoxSpec& box, const BrinkmanOptions& options = {});

/// int rho psi dx by tensor Gauss-Legendre over the support (per cell for
/// grid densities, spherical coordinates for the ball).
Vec3 integrate_against_density(const DensityModel& density, const std::function<Vec3(const Vec3&)>& f);

}  // namespace phlab

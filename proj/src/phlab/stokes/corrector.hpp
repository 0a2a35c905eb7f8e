#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

#include "phlab/geometry/configuration.hpp"
#include "phlab/geometry/neighbors.hpp"
#include "phlab/geometry/particle.hpp"
#include "phlab/geometry/truncation.hpp"
#include "phlab/stokes/sphere_solution.hpp"

namespace phlab {

enum class CorrectorRegion {
  kHole,   // inside the particle, w = 0
  kInner,  // C_i: rescaled exterior solution, hole radius <= r <= eta/4
  kBlend,  // D_i: eta/4 < r < eta/2
  kOuter,  // K_i and far field, w = Id
};

struct CorrectorValue {
  Mat3 w;                    // column k is w_k
  Vec3 q;                    // q_k
  std::array<Mat3, 3> grad;  // grad[k](i, j) = d (w_k)_i / d x_j
  CorrectorRegion region = CorrectorRegion::kOuter;
  std::ptrdiff_t particle = -1;
};

/// Corrector w^eps for spherical particles of radius a eps^alpha.
///
/// In C_i, w_k = e_k - w_k^{sphere}((x - x_i)/eps^alpha) and
/// q_k = -eps^{-alpha} p_k(...). In the annulus D_i the disturbance is
/// blended out as curl(chi(r) eps^alpha f'(rho) n x e_k), which is exactly
/// divergence free; chi is the quintic smoothstep from 1 at eta/4 to 0 at
/// eta/2. The pressure there is chi times the analytic pressure.
class CorrectorField {
 public:
  CorrectorField(const ParticleConfiguration& config, const TruncationScales& scales,
                 const ReferenceParticle& particle = ReferenceParticle::sphere());
  /// Explicit geometry: eps and eta are free parameters here.
  CorrectorField(std::vector<Vec3> centers, double eps, double alpha, std::vector<double> eta,
                 double particle_radius);

  std::size_t size() const { return centers_.size(); }
  double eps() const { return eps_; }
  double alpha() const { return alpha_; }
  double eps_alpha() const { return eps_alpha_; }
  double particle_radius() const { return solution_.radius(); }
  double hole_radius() const { return hole_radius_; }
  const Vec3& center(std::size_t i) const { return centers_[i]; }
  double eta(std::size_t i) const { return eta_[i]; }
  const SphereStokesSolution& solution() const { return solution_; }

  /// Region-dispatched evaluation at x.
  CorrectorValue eval(const Vec3& x) const;
  /// Evaluation relative to particle i (d = x - x_i), ignoring the others.
  CorrectorValue eval_local(std::size_t i, const Vec3& d) const;

  /// Quintic cutoff for particle radius eta: chi and its first two r-derivatives.
  static std::array<double, 3> cutoff(double r, double eta);

 private:
  void init();

  std::vector<Vec3> centers_;
  double eps_, alpha_, eps_alpha_ = 0.0, hole_radius_ = 0.0;
  std::vector<double> eta_;
  double max_eta_ = 0.0;
  SphereStokesSolution solution_;
  std::shared_ptr<SpatialGrid> grid_;
};

/// Matrix value of w^eps at x.
Mat3 corrector_eval(const CorrectorField& field, const Vec3& x);

enum class CorrectorQuantity { kWMinusId, kGradient, kPressure };

/// ||Q||_{L^p(B_{eta_i/2}(x_i))} for Q = w - Id (Frobenius), grad w
/// (Frobenius over all 27 entries) or q (Euclidean), by adaptive
/// Gauss-Kronrod in the radius (logarithmic in C_i) over a product sphere
/// rule, to relative tolerance 1e-3.
double corrector_norm(const CorrectorField& field, CorrectorQuantity quantity, double p, std::size_t particle);

}  // namespace phlab

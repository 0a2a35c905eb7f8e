#include "phlab/stokes/corrector.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "phlab/common/error.hpp"
#include "phlab/common/quadrature.hpp"

namespace phlab {

namespace {

double sphere_radius_of(const ReferenceParticle& particle) {
  if (!particle.is_sphere()) throw DomainError("corrector: only spherical reference particles are supported");
  return particle.radius();
}

constexpr double kNormTol = 1e-3;

}  // namespace

CorrectorField::CorrectorField(const ParticleConfiguration& config, const TruncationScales& scales,
                               const ReferenceParticle& particle)
    : centers_(config.centers()),
      eps_(config.eps()),
      alpha_(config.alpha()),
      eta_(scales.eta),
      solution_(sphere_radius_of(particle)) {
  init();
}

CorrectorField::CorrectorField(std::vector<Vec3> centers, double eps, double alpha, std::vector<double> eta,
                               double particle_radius)
    : centers_(std::move(centers)), eps_(eps), alpha_(alpha), eta_(std::move(eta)), solution_(particle_radius) {
  init();
}

void CorrectorField::init() {
  if (centers_.empty()) throw InvalidArgument("corrector: no particles");
  if (eta_.size() != centers_.size()) throw InvalidArgument("corrector: one eta per particle required");
  if (!(eps_ > 0.0) || !(alpha_ > 1.0)) throw DomainError("corrector: need eps > 0 and alpha > 1");
  eps_alpha_ = std::pow(eps_, alpha_);
  hole_radius_ = solution_.radius() * eps_alpha_;
  for (std::size_t i = 0; i < eta_.size(); ++i) {
    if (!(eta_[i] / 4.0 > hole_radius_))
      throw DomainError("corrector: eta/4 of particle " + std::to_string(i) + " does not exceed the hole radius");
    max_eta_ = std::max(max_eta_, eta_[i]);
  }
  if (centers_.size() > 1) {
    Vec3 lo = centers_[0], hi = centers_[0];
    for (const Vec3& c : centers_) lo = lo.cwiseMin(c), hi = hi.cwiseMax(c);
    const double cell = std::max(max_eta_, nn_cell_size(hi - lo, centers_.size()));
    grid_ = std::make_shared<SpatialGrid>(centers_, cell, 8 * centers_.size() + 1024);
  }
}

std::array<double, 3> CorrectorField::cutoff(double r, double eta) {
  const double w = eta / 4.0;
  const double t = (r - w) / w;
  if (t <= 0.0) return {1.0, 0.0, 0.0};
  if (t >= 1.0) return {0.0, 0.0, 0.0};
  const double s = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
  const double ds = 30.0 * t * t * (t - 1.0) * (t - 1.0);
  const double dds = 60.0 * t * (t - 1.0) * (2.0 * t - 1.0);
  return {1.0 - s, -ds / w, -dds / (w * w)};
}

CorrectorValue CorrectorField::eval_local(std::size_t i, const Vec3& d) const {
  CorrectorValue v;
  v.particle = static_cast<std::ptrdiff_t>(i);
  const double r = d.norm();
  const double eta = eta_[i];
  if (r >= eta / 2.0) {
    v.region = CorrectorRegion::kOuter;
    v.particle = -1;
    v.w = Mat3::Identity();
    v.q.setZero();
    for (auto& g : v.grad) g.setZero();
    return v;
  }
  if (r < hole_radius_) {
    v.region = CorrectorRegion::kHole;
    v.w.setZero();
    v.q.setZero();
    for (auto& g : v.grad) g.setZero();
    return v;
  }
  const double ea = eps_alpha_;
  const Vec3 y = d / ea;
  const Vec3 n = d / r;
  const Mat3 I = Mat3::Identity();
  if (r <= eta / 4.0) {
    v.region = CorrectorRegion::kInner;
    for (int k = 0; k < 3; ++k) {
      const SphereStokesValue s = solution_.eval(k, y);
      v.w.col(k) = I.col(k) - s.velocity;
      v.q[k] = -s.pressure / ea;
      v.grad[k] = -s.gradient / ea;
    }
    return v;
  }
  v.region = CorrectorRegion::kBlend;
  const auto [chi, dchi, ddchi] = cutoff(r, eta);
  const double rho = r / ea;
  const double f1 = solution_.potential_d1(rho), f2 = solution_.potential_d2(rho);
  const double g = dchi * ea * f1;
  const double dg = ddchi * ea * f1 + dchi * f2;
  const Mat3 nn = n * n.transpose();
  for (int k = 0; k < 3; ++k) {
    const SphereStokesValue s = solution_.eval(k, y);
    const double nk = n[k];
    Vec3 V = nk * n;
    V[k] -= 1.0;
    Vec3 ek = Vec3::Zero();
    ek[k] = 1.0;
    const Mat3 dV = (n * (ek - nk * n).transpose() + nk * (I - nn)) / r;
    const Vec3 wt = chi * s.velocity + g * V;
    const Mat3 gt = dchi * s.velocity * n.transpose() + (chi / ea) * s.gradient + dg * V * n.transpose() + g * dV;
    v.w.col(k) = ek - wt;
    v.grad[k] = -gt;
    v.q[k] = -chi * s.pressure / ea;
  }
  return v;
}

CorrectorValue CorrectorField::eval(const Vec3& x) const {
  if (!grid_) return eval_local(0, x - centers_[0]);
  const double reach = max_eta_ / 2.0;
  std::ptrdiff_t hit = -1;
  grid_->for_each_in_box((x.array() - reach).matrix(), (x.array() + reach).matrix(), [&](std::size_t i) {
    if (hit >= 0) return;
    if ((x - centers_[i]).norm() < eta_[i] / 2.0) hit = static_cast<std::ptrdiff_t>(i);
  });
  if (hit < 0) return eval_local(0, Vec3::Constant(std::numeric_limits<double>::infinity()));
  return eval_local(static_cast<std::size_t>(hit), x - centers_[hit]);
}

Mat3 corrector_eval(const CorrectorField& field, const Vec3& x) { return field.eval(x).w; }

double corrector_norm(const CorrectorField& field, CorrectorQuantity quantity, double p, std::size_t particle) {
  if (particle >= field.size()) throw InvalidArgument("corrector_norm: particle index out of range");
  if (quantity == CorrectorQuantity::kWMinusId) {
    if (!(p >= 1.0 && p <= 3.0)) throw DomainError("corrector_norm: p must lie in [1, 3] for w - Id");
  } else if (p != 1.0 && p != 2.0) {
    throw DomainError("corrector_norm: p must be 1 or 2 for the gradient and the pressure");
  }

  auto magnitude = [&](const CorrectorValue& v) {
    switch (quantity) {
      case CorrectorQuantity::kWMinusId:
        return (v.w - Mat3::Identity()).norm();
      case CorrectorQuantity::kGradient:
        return std::sqrt(v.grad[0].squaredNorm() + v.grad[1].squaredNorm() + v.grad[2].squaredNorm());
      case CorrectorQuantity::kPressure:
        return v.q.norm();
    }
    return 0.0;
  };

  static const std::vector<SphereNode> coarse = sphere_rule(12, 24);
  static const std::vector<SphereNode> fine = sphere_rule(18, 36);
  static const std::vector<SphereNode> finest = sphere_rule(36, 72);
  auto shell = [&](const std::vector<SphereNode>& rule, double r) {
    double s = 0.0;
    for (const SphereNode& node : rule) s += node.weight * std::pow(magnitude(field.eval_local(particle, r * node.direction)), p);
    return 4.0 * std::numbers::pi * s;
  };
  // Angular mean of |Q|^p on the sphere of radius r, refined once if the two
  // lower-order rules disagree.
  auto angular = [&](double r) {
    const double a = shell(coarse, r), b = shell(fine, r);
    if (std::abs(a - b) <= 0.1 * kNormTol * std::abs(b)) return b;
    return shell(finest, r);
  };

  const double hole = field.hole_radius();
  const double eta = field.eta(particle);
  double total = 0.0;
  // Inside the hole w = 0, grad w = 0 and q = 0.
  if (quantity == CorrectorQuantity::kWMinusId)
    total += 4.0 / 3.0 * std::numbers::pi * hole * hole * hole * std::pow(std::sqrt(3.0), p);

  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double err_inner = 0.0, err_outer = 0.0;
  // C_i in u = log r, where the integrand decays like a power of r.
  const double inner = GK::integrate(
      [&](double u) {
        const double r = std::exp(u);
        return angular(r) * r * r * r;
      },
      std::log(hole), std::log(eta / 4.0), 20, 0.1 * kNormTol, &err_inner);
  const double outer = GK::integrate([&](double r) { return angular(r) * r * r; }, eta / 4.0, eta / 2.0, 20,
                                     0.1 * kNormTol, &err_outer);
  total += inner + outer;
  if (!std::isfinite(total) || err_inner + err_outer > kNormTol * std::abs(total))
    throw NumericalError("corrector_norm: quadrature did not reach the relative tolerance");
  return std::pow(total, 1.0 / p);
}

}  // namespace phlab

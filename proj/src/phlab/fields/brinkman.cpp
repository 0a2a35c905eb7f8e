#include "phlab/fields/brinkman.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "phlab/common/error.hpp"
#include "phlab/common/parallel.hpp"
#include "phlab/common/quadrature.hpp"
#include "phlab/stokes/corrector.hpp"
#include "phlab/transport/transport.hpp"

namespace phlab {

namespace {

// Tensor Gauss-Legendre over a box, `panels` subintervals of `order` points per axis.
template <typename F>
void box_quadrature(const Box& b, int panels, int order, F&& f) {
  const QuadratureRule ref = gauss_legendre(order, 0.0, 1.0);
  std::vector<double> x[3], w[3];
  for (int d = 0; d < 3; ++d) {
    const double len = (b.hi[d] - b.lo[d]) / panels;
    for (int p = 0; p < panels; ++p)
      for (std::size_t q = 0; q < ref.size(); ++q) {
        x[d].push_back(b.lo[d] + (p + ref.nodes[q]) * len);
        w[d].push_back(ref.weights[q] * len);
      }
  }
  for (std::size_t i = 0; i < x[0].size(); ++i)
    for (std::size_t j = 0; j < x[1].size(); ++j)
      for (std::size_t k = 0; k < x[2].size(); ++k) f(Vec3(x[0][i], x[1][j], x[2][k]), w[0][i] * w[1][j] * w[2][k]);
}

Box cube(const Vec3& c, double side) {
  return {(c.array() - side / 2.0).matrix(), (c.array() + side / 2.0).matrix()};
}

// (||psi||_{L^2}^2, ||grad psi||_{L^2}^2) over a box.
std::pair<double, double> psi_norms(const TestField& psi, const Box& b, int panels, int order) {
  double l2 = 0.0, g2 = 0.0;
  box_quadrature(b, panels, order, [&](const Vec3& x, double w) {
    l2 += w * psi.value(x).squaredNorm();
    g2 += w * psi.gradient(x).squaredNorm();
  });
  return {l2, g2};
}

}  // namespace

TestField TestField::gaussian(const Vec3& center, double sigma, const Vec3& amplitude) {
  if (!(sigma > 0.0)) throw InvalidArgument("test field: sigma must be positive");
  TestField t;
  t.value = [=](const Vec3& x) {
    return Vec3(amplitude * std::exp(-(x - center).squaredNorm() / (2.0 * sigma * sigma)));
  };
  t.gradient = [=](const Vec3& x) {
    const Vec3 d = x - center;
    const double g = std::exp(-d.squaredNorm() / (2.0 * sigma * sigma));
    return Mat3(-(g / (sigma * sigma)) * amplitude * d.transpose());
  };
  return t;
}

TestField TestField::constant(const Vec3& c) {
  return {[=](const Vec3&) { return c; }, [](const Vec3&) { return Mat3(Mat3::Zero()); }};
}

Vec3 integrate_against_density(const DensityModel& density, const std::function<Vec3(const Vec3&)>& f) {
  Vec3 acc = Vec3::Zero();
  switch (density.kind()) {
    case DensityModel::Kind::kUniformBox: {
      const double rho = density.sup_norm();
      box_quadrature(density.support_box(), 8, 8, [&](const Vec3& x, double w) { acc += w * rho * f(x); });
      break;
    }
    case DensityModel::Kind::kPiecewiseGrid: {
      const auto& dims = density.grid_dims();
      const auto& masses = density.cell_masses();
      for (int iz = 0; iz < dims[2]; ++iz)
        for (int iy = 0; iy < dims[1]; ++iy)
          for (int ix = 0; ix < dims[0]; ++ix) {
            const double m = masses[ix + static_cast<std::size_t>(dims[0]) * (iy + static_cast<std::size_t>(dims[1]) * iz)];
            if (m == 0.0) continue;
            const Box cb = density.cell_box(ix, iy, iz);
            const double rho = m / cb.volume();
            box_quadrature(cb, 1, 6, [&](const Vec3& x, double w) { acc += w * rho * f(x); });
          }
      break;
    }
    case DensityModel::Kind::kUniformBall: {
      const double R = density.ball_radius();
      const double rho = density.sup_norm();
      const QuadratureRule radial = gauss_legendre(32, 0.0, R);
      const std::vector<SphereNode> ang = sphere_rule(16, 32);
      for (std::size_t q = 0; q < radial.size(); ++q) {
        const double r = radial.nodes[q];
        const double wr = radial.weights[q] * 4.0 * std::numbers::pi * r * r;
        for (const SphereNode& nd : ang) acc += wr * nd.weight * rho * f(density.ball_center() + r * nd.direction);
      }
      break;
    }
  }
  return acc;
}

BrinkmanGap brinkman_gap_pairing(const ParticleConfiguration& config, const TruncationScales& scales,
                                 const Mat3& resistance, const DensityModel& density, const TestField& psi,
                                 const BoxSpec& box, const BrinkmanOptions& options) {
  if (!psi.value || !psi.gradient) throw InvalidArgument("brinkman_gap_pairing: psi needs both value and gradient");
  if (!(options.lambda > 0.0 && options.lambda < 1.0)) throw DomainError("brinkman_gap_pairing: lambda must lie in (0, 1)");
  box.validate();
  box.check_support(density.support_box());

  // Throws DomainError when eta_i/4 does not clear the hole.
  const CorrectorField field(config.centers(), config.eps(), config.alpha(), scales.eta, options.particle_radius);
  const std::size_t n = config.size();
  const double eps = config.eps();
  const double ea = field.eps_alpha();
  const double eps3 = eps * eps * eps;

  static const std::vector<SphereNode> surf = sphere_rule(8, 16);
  static const QuadratureRule radial = gauss_legendre(6, 0.0, 1.0);
  const double s_tilde = std::pow(eps, 1.0 - options.lambda);

  struct PerParticle {
    Vec3 m = Vec3::Zero();
    double h1 = 0.0, l2 = 0.0;
  };
  std::vector<PerParticle> per(n);
  parallel_for(n, options.threads, [&](std::size_t i) {
    const Vec3& xi = config.center(i);
    const double eta = scales.eta[i];
    const double r0 = eta / 4.0;
    PerParticle& out = per[i];
    // Surface term on dB_{eta/4}: the analytic traction of the rescaled solution.
    const double area = 4.0 * std::numbers::pi * r0 * r0;
    for (const SphereNode& nd : surf) {
      const Vec3 x = xi + r0 * nd.direction;
      const Vec3 p = psi.value(x);
      for (int k = 0; k < 3; ++k) {
        const SphereStokesValue s = field.solution().eval(k, (r0 / ea) * nd.direction);
        out.m[k] += nd.weight * area * (s.stress * nd.direction).dot(p) / ea;
      }
    }
    // Annulus term int_D T : grad psi.
    for (std::size_t q = 0; q < radial.size(); ++q) {
      const double r = r0 + radial.nodes[q] * r0;
      const double wr = radial.weights[q] * r0 * 4.0 * std::numbers::pi * r * r;
      for (const SphereNode& nd : surf) {
        const Vec3 d = r * nd.direction;
        const CorrectorValue v = field.eval_local(i, d);
        const Mat3 gp = psi.gradient(xi + d);
        for (int k = 0; k < 3; ++k) {
          const Mat3 T = v.grad[k] - v.q[k] * Mat3::Identity();
          out.m[k] += wr * nd.weight * T.cwiseProduct(gp).sum();
        }
      }
    }
    const auto [l2t, g2t] = psi_norms(psi, cube(xi, s_tilde), 1, 3);
    out.h1 = std::pow(eta, -0.5) * eps3 * std::sqrt(l2t + g2t);
    const auto [l2q, g2q] = psi_norms(psi, cube(xi, eps), 1, 3);
    (void)g2q;
    out.l2 = ea / eta * std::sqrt(l2q);
  });

  BrinkmanGap r;
  r.m_pairing.setZero();
  double cube_h1 = 0.0, cube_l2 = 0.0;
  for (const PerParticle& p : per) {
    r.m_pairing += p.m;
    cube_h1 += p.h1;
    cube_l2 += p.l2;
  }
  r.m_pairing *= eps3 / ea;  // eps^{3 - alpha}

  const Vec3 rho_psi = integrate_against_density(density, psi.value);
  for (int k = 0; k < 3; ++k) r.rho_r_pairing[k] = resistance.col(k).dot(rho_psi);
  r.column_gap = r.m_pairing - r.rho_r_pairing;
  r.gap = r.column_gap.norm();

  BrinkmanBoundParts& parts = r.parts;
  const Box whole{box.lo(), (box.lo().array() + box.side).matrix()};
  const auto [l2, g2] = psi_norms(psi, whole, 16, 4);
  parts.psi_h1 = std::sqrt(l2 + g2);
  if (options.w2) {
    parts.w2 = *options.w2;
  } else {
    const ParticleConfiguration ref = sample_configuration(density, n, options.w2_seed, config.alpha());
    const std::vector<double> w(n, 1.0 / static_cast<double>(n));
    parts.w2 = std::sqrt(std::max(0.0, solve_transport(config.centers(), w, ref.centers(), w).cost));
  }
  parts.w2_term = parts.w2 * parts.psi_h1;
  parts.smear_term = s_tilde * parts.psi_h1;
  parts.cube_h1_term = cube_h1;
  parts.cube_l2_term = cube_l2;
  return r;
}

}  // namespace phlab

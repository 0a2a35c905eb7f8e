#include "phlab/oracles/suite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "phlab/common/version.hpp"
#include "phlab/events/indicators.hpp"
#include "phlab/fields/brinkman.hpp"
#include "phlab/fields/grid.hpp"
#include "phlab/geometry/configuration.hpp"
#include "phlab/geometry/neighbors.hpp"
#include "phlab/geometry/truncation.hpp"
#include "phlab/oracles/brute.hpp"
#include "phlab/stokes/resistance.hpp"
#include "phlab/transport/transport.hpp"

namespace phlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
enum : std::uint64_t { kTagOracle = 7 };

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

void compare(ScalingReport& rep, const std::string& what, std::size_t n, double diff, double tol) {
  const double eps = n > 0 ? ParticleConfiguration::eps_for(n) : kNaN;
  rep.rows.push_back({what, n, eps, diff, kNaN, kNaN, tol, 1});
  rep.checks.push_back({n > 0 ? what + " (N=" + std::to_string(n) + ")" : what, diff <= tol,
                        "discrepancy " + fmt(diff) + ", tolerance " + fmt(tol)});
}

std::vector<Vec3> draw_points(const ExperimentConfig& c, std::size_t n, std::uint64_t a, std::uint64_t b) {
  RandomStream rng = RandomStream::derive(c.seed, {kTagOracle, a, b});
  return sample_configuration(c.density.build(), n, rng, c.alpha).centers();
}

void nn_oracle(ScalingReport& rep, const ExperimentConfig& c) {
  const std::size_t n = std::min<std::size_t>(c.n_list.empty() ? 1000 : c.n_list.front(), 2000);
  const auto pts = draw_points(c, std::max<std::size_t>(n, 2), 0, 0);
  const auto fast = nearest_neighbor_distances(pts);
  const auto slow = oracle::nn_distances(pts);
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) mismatches += fast[i] != slow[i] ? 1 : 0;
  compare(rep, "nearest neighbour: hash grid vs all pairs (mismatches)", pts.size(), static_cast<double>(mismatches),
          0.0);
}

void multiplicity_oracle(ScalingReport& rep, const ExperimentConfig& c) {
  std::size_t worst = 0;
  for (std::uint64_t t = 0; t < 5; ++t) {
    const auto pts = draw_points(c, 40, 1, t);
    const double side = smeared_cube_side(ParticleConfiguration::eps_for(40), c.lambda);
    const std::size_t a = max_cube_multiplicity(pts, side), b = oracle::cube_multiplicity(pts, side);
    worst = std::max(worst, a > b ? a - b : b - a);
  }
  compare(rep, "cube multiplicity: sweep vs brute force (max difference)", 40, static_cast<double>(worst), 0.0);
}

void transport_oracles(ScalingReport& rep, const ExperimentConfig& c) {
  double worst = 0.0;
  for (std::uint64_t t = 0; t < 20; ++t) {
    const std::size_t n = 2 + t % 5;
    const auto x = draw_points(c, n, 2, 2 * t), y = draw_points(c, n, 2, 2 * t + 1);
    const double w = w2_assignment(DiscreteMeasure::uniform(x), DiscreteMeasure::uniform(y));
    worst = std::max(worst, std::abs(w * w - oracle::w2_squared_permutations(x, y)));
  }
  compare(rep, "W2^2: network simplex vs permutations", 6, worst, 1e-12);

  const std::size_t n = std::min<std::size_t>(c.n_list.empty() ? 200 : c.n_list.front(), 200);
  const auto x = draw_points(c, n, 3, 0), y = draw_points(c, n, 3, 1);
  const double w = w2_assignment(DiscreteMeasure::uniform(x), DiscreteMeasure::uniform(y));
  const double h = oracle::w2_squared_hungarian(x, y);
  compare(rep, "W2^2: network simplex vs Hungarian (relative)", n, std::abs(w * w - h) / h, 1e-9);

  const std::size_t m = std::min<std::size_t>(n, 64);
  const auto xs = draw_points(c, m, 3, 2), ys = draw_points(c, 4 * m, 3, 3);
  const double wr = w2_assignment(DiscreteMeasure::uniform(xs), DiscreteMeasure::uniform(ys));
  const double hr = oracle::w2_squared_replicated(xs, ys);
  compare(rep, "W2^2 N x 4N: network simplex vs replicated Hungarian (relative)", m, std::abs(wr * wr - hr) / hr,
          1e-9);
}

void hneg1_oracle(ScalingReport& rep, const ExperimentConfig& c) {
  const BoxSpec& box = c.box;
  GridField f(box);
  const Vec3 k(1.0, 2.0, 0.0);
  const double amp = 0.7;
  for (int ix = 0; ix < box.n; ++ix)
    for (int iy = 0; iy < box.n; ++iy)
      for (int iz = 0; iz < box.n; ++iz) {
        const Vec3 p = box.cell_center(ix, iy, iz) - box.lo();
        f.at(ix, iy, iz) = amp * std::sin(2.0 * std::numbers::pi * k.dot(p) / box.side);
      }
  const double num = h_neg1_norm(f, true);
  const double ref = oracle::single_mode_hneg1(amp, k, box.side);
  compare(rep, "H-1 norm of a single Fourier mode (relative)", 0, std::abs(num - ref) / ref, 1e-6);
}

void stokes_oracles(ScalingReport& rep, const ExperimentConfig& c, unsigned threads) {
  const double a = c.particle_radius;
  double worst = 0.0;
  for (double f : {2.0, 4.0, 8.0}) {
    const Vec3 t = oracle::sphere_traction(a, 0, f * a, 200);
    worst = std::max(worst, std::abs(t.x() - 6.0 * std::numbers::pi * a) / (6.0 * std::numbers::pi * a));
  }
  compare(rep, "traction integral vs 6 pi a at R = 2a, 4a, 8a (relative)", 0, worst, 5e-3);
  if (c.kind == ExperimentKind::kResistance && c.mesh.empty()) {
    const ResistanceResult r = resistance_bem_sphere(a, 2, std::nullopt, threads);
    const double s = 6.0 * std::numbers::pi * a;
    compare(rep, "BEM level 2 vs 6 pi a I (relative)", r.vertices,
            (r.R - s * Mat3::Identity()).norm() / (s * std::sqrt(3.0)), 0.05);
  }
}

void brinkman_oracle(ScalingReport& rep, const ExperimentConfig& c) {
  // With constant psi the annulus term vanishes and each surface integral is
  // the drag R_k . psi, so <M, psi> = eps^{3-alpha} N eps^alpha R psi = R psi.
  const DensityModel density = c.density.build();
  const std::size_t n = 200;
  for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
    RandomStream rng = RandomStream::derive(c.seed, {kTagOracle, 4, attempt});
    const ParticleConfiguration cfg = sample_configuration(density, n, rng, c.alpha);
    if (!indicator_A(cfg, 1.0, c.alpha)) continue;
    const TruncationScales scales = truncation_scales(cfg, c.beta, c.m_eta);
    const Mat3 R = 6.0 * std::numbers::pi * c.particle_radius * Mat3::Identity();
    BrinkmanOptions opt;
    opt.lambda = c.lambda;
    opt.particle_radius = c.particle_radius;
    opt.w2 = 0.0;
    opt.threads = 1;
    const BrinkmanGap g = brinkman_gap_pairing(cfg, scales, R, density, TestField::constant(Vec3(1.0, -2.0, 0.5)),
                                               c.box, opt);
    compare(rep, "constant psi: <M, psi> vs R psi (relative)", n, g.gap / g.rho_r_pairing.norm(), 1e-9);
    return;
  }
}

}  // namespace

ScalingReport run_oracles(const ExperimentConfig& config, unsigned threads) {
  validate(config);
  ScalingReport rep;
  rep.experiment = std::string("oracle:") + to_string(config.kind);
  rep.config_hash = config_hash(config);
  rep.seed = config.seed;
  rep.version = kVersion;
  switch (config.kind) {
    case ExperimentKind::kEvents:
    case ExperimentKind::kEtaMoments:
      nn_oracle(rep, config);
      multiplicity_oracle(rep, config);
      break;
    case ExperimentKind::kW2Rates:
      transport_oracles(rep, config);
      break;
    case ExperimentKind::kHneg1:
      transport_oracles(rep, config);
      hneg1_oracle(rep, config);
      break;
    case ExperimentKind::kCorrector:
    case ExperimentKind::kResistance:
      stokes_oracles(rep, config, threads);
      break;
    case ExperimentKind::kBrinkmanGap:
      brinkman_oracle(rep, config);
      hneg1_oracle(rep, config);
      break;
  }
  return rep;
}

}  // namespace phlab

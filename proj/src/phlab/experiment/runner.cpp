#include "phlab/experiment/runner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "phlab/common/error.hpp"
#include "phlab/common/parallel.hpp"
#include "phlab/common/version.hpp"
#include "phlab/events/estimate.hpp"
#include "phlab/events/eta_moment.hpp"
#include "phlab/events/indicators.hpp"
#include "phlab/fields/brinkman.hpp"
#include "phlab/fields/grid.hpp"
#include "phlab/geometry/configuration.hpp"
#include "phlab/geometry/mesh.hpp"
#include "phlab/geometry/particle.hpp"
#include "phlab/geometry/truncation.hpp"
#include "phlab/stokes/corrector.hpp"
#include "phlab/stokes/resistance.hpp"
#include "phlab/transport/transport.hpp"

namespace phlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Stream path tags keep the pipelines' randomness disjoint.
enum : std::uint64_t { kTagConfig = 1, kTagAux = 2 };

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& v) {
  MeanSe out;
  const double n = static_cast<double>(v.size());
  out.mean = pairwise_sum(v) / n;
  if (v.size() > 1) {
    std::vector<double> sq(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - out.mean) * (v[i] - out.mean);
    out.se = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
  }
  return out;
}

ReportRow mean_row(const std::string& stat, std::size_t n, const std::vector<double>& v, double bound) {
  const MeanSe m = mean_se(v);
  return {stat, n, ParticleConfiguration::eps_for(n), m.mean, m.mean - kZ95 * m.se, m.mean + kZ95 * m.se, bound,
          v.size()};
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

std::string n_tag(std::size_t n) { return " (N=" + std::to_string(n) + ")"; }

void add_slope_check(ScalingReport& rep, const std::string& stat, const std::string& abscissa, double lo, double hi) {
  auto f = rep.fit(stat, abscissa);
  if (!f) return;
  rep.checks.push_back({"slope of " + stat + " in [" + fmt(lo) + ", " + fmt(hi) + "]",
                        f->fit.slope >= lo && f->fit.slope <= hi,
                        "slope " + fmt(f->fit.slope) + " ci [" + fmt(f->fit.slope_ci_low) + ", " +
                            fmt(f->fit.slope_ci_high) + "]"});
  rep.fits.push_back(std::move(*f));
}

ParticleConfiguration draw(const DensityModel& density, std::size_t n, const ExperimentConfig& c, std::uint64_t j,
                           std::uint64_t t, std::uint64_t attempt = 0) {
  RandomStream rng = RandomStream::derive(c.seed, {kTagConfig, j, t, attempt});
  return sample_configuration(density, n, rng, c.alpha);
}

// ---------------------------------------------------------------------------

void run_events(const ExperimentConfig& c, unsigned threads, ScalingReport& rep) {
  const DensityModel density = c.density.build();
  const double rho_sup = density.sup_norm();
  for (std::size_t j = 0; j < c.n_list.size(); ++j) {
    const std::size_t n = c.n_list[j];
    const double eps = ParticleConfiguration::eps_for(n);
    const double L = std::pow(eps, c.alpha - 2.0);
    std::vector<char> a(c.trials), b(c.trials);
    std::vector<double> d1(c.trials);
    parallel_for(c.trials, threads, [&](std::size_t t) {
      const ParticleConfiguration cfg = draw(density, n, c, j, t);
      // threshold 2 L eps^2 = 2 eps^alpha with L = eps^{alpha-2}
      a[t] = indicator_A(cfg, L, 2.0);
      b[t] = indicator_B(cfg, c.lambda, rho_sup);
      d1[t] = cfg.nn_distances()[0];
    });
    std::size_t ka = 0, kb = 0;
    for (std::size_t t = 0; t < c.trials; ++t) {
      ka += static_cast<std::size_t>(a[t]);
      kb += static_cast<std::size_t>(b[t]);
    }
    const EventEstimate ea = wilson_estimate(ka, c.trials), eb = wilson_estimate(kb, c.trials);
    const double bound_a = std::exp(-4.0 * std::numbers::pi * rho_sup * L * L * L / 3.0);
    rep.rows.push_back({"P[A]", n, eps, ea.p_hat, ea.ci_low, ea.ci_high, bound_a, c.trials});
    rep.rows.push_back({"P[B]", n, eps, eb.p_hat, eb.ci_low, eb.ci_high, 0.99, c.trials});
    rep.rows.push_back(mean_row("E[d1]", n, d1, eps));
    rep.checks.push_back({"P[A] >= exp(-4 pi rho L^3 / 3) - ci width" + n_tag(n), ea.p_hat >= bound_a - ea.ci_width(),
                          "p_hat " + fmt(ea.p_hat) + ", bound " + fmt(bound_a) + ", width " + fmt(ea.ci_width())});
    rep.checks.push_back({"P[B] > 0.99" + n_tag(n), eb.p_hat > 0.99, "p_hat " + fmt(eb.p_hat)});
  }
  add_slope_check(rep, "E[d1]", "N", -1.0 / 3.0 - 0.05, -1.0 / 3.0 + 0.05);
}

void run_eta_moments(const ExperimentConfig& c, unsigned threads, ScalingReport& rep) {
  const DensityModel density = c.density.build();
  std::vector<double> frozen(c.kappa.size(), kNaN);
  for (std::size_t j = 0; j < c.n_list.size(); ++j) {
    const std::size_t n = c.n_list[j];
    const double eps = ParticleConfiguration::eps_for(n);
    const double cap = c.m_eta * std::pow(eps, c.beta);
    const std::vector<double> eta = sample_eta(density, n, c.beta, c.m_eta, c.trials, sub_seed(c.seed, {kTagConfig, j}),
                                               threads);
    for (std::size_t q = 0; q < c.kappa.size(); ++q) {
      const double kap = c.kappa[q];
      const EtaMomentResult mc = eta_moment_from_samples(eta, kap, cap);
      const EtaMomentResult lc = eta_moment(density, n, c.beta, c.m_eta, kap, c.trials, EtaMode::kLayerCake,
                                            sub_seed(c.seed, {kTagAux, j, q}), threads);
      const double bound = std::pow(c.m_eta, kap) * (1.0 + std::pow(eps, 3.0 * (c.beta - 1.0))) *
                           std::pow(eps, c.beta * kap);
      const std::string k = " kappa=" + fmt(kap);
      rep.rows.push_back({"E[eta^kappa] mc" + k, n, eps, mc.value, mc.value - kZ95 * mc.std_error,
                          mc.value + kZ95 * mc.std_error, bound, mc.trials});
      rep.rows.push_back({"E[eta^kappa] layer-cake" + k, n, eps, lc.value, lc.value - kZ95 * lc.std_error,
                          lc.value + kZ95 * lc.std_error, bound, lc.trials});
      const double se = std::hypot(mc.std_error, lc.std_error);
      const double diff = std::abs(mc.value - lc.value);
      rep.checks.push_back({"mc and layer-cake agree within 3 se" + k + n_tag(n),
                            diff <= 3.0 * se + 1e-12 * std::abs(lc.value),
                            "|diff| " + fmt(diff) + ", 3 se " + fmt(3.0 * se)});
      const double ratio = mc.value / bound;
      if (j == 0) {
        frozen[q] = ratio;
      } else {
        const double rel = ratio / frozen[q];
        rep.checks.push_back({"frozen constant stable within 25%" + k + n_tag(n), rel >= 0.75 && rel <= 1.25,
                              "C(N)/C(N0) = " + fmt(rel)});
      }
    }
  }
}

void run_w2_rates(const ExperimentConfig& c, unsigned threads, ScalingReport& rep) {
  const DensityModel density = c.density.build();
  for (std::size_t j = 0; j < c.n_list.size(); ++j) {
    const std::size_t n = c.n_list[j];
    const double eps = ParticleConfiguration::eps_for(n);
    std::vector<double> w2sq(c.trials), plan(c.trials);
    double plan_bound = 0.0;
    parallel_for(c.trials, threads, [&](std::size_t t) {
      const ParticleConfiguration cfg = draw(density, n, c, j, t);
      const double w = w2_empirical_vs_density(density, cfg, c.ref_factor * n, sub_seed(c.seed, {kTagAux, j, t}));
      w2sq[t] = w * w;
      plan[t] = w2_plan_cost_smeared(cfg, c.lambda).plan_cost;
    });
    plan_bound = std::sqrt(3.0) * smeared_cube_side(eps, c.lambda);
    rep.rows.push_back(mean_row("E[W2^2]", n, w2sq, 1.0 / std::sqrt(static_cast<double>(n))));
    rep.rows.push_back(mean_row("plan_cost", n, plan, plan_bound));
    const double worst = *std::max_element(plan.begin(), plan.end());
    rep.checks.push_back({"plan_cost <= sqrt(3) eps^(1-lambda)" + n_tag(n), worst <= plan_bound,
                          "max " + fmt(worst) + ", bound " + fmt(plan_bound)});
  }
  add_slope_check(rep, "E[W2^2]", "N", -0.75, -0.40);
}

void run_hneg1(const ExperimentConfig& c, unsigned threads, ScalingReport& rep) {
  const DensityModel density = c.density.build();
  const GridField rho = rasterize(density, c.box);
  for (std::size_t j = 0; j < c.n_list.size(); ++j) {
    const std::size_t n = c.n_list[j];
    std::vector<double> value(c.trials), bound(c.trials);
    parallel_for(c.trials, threads, [&](std::size_t t) {
      const ParticleConfiguration cfg = draw(density, n, c, j, t);
      const GridField diff = rasterize(SmearedDensity::from(cfg, c.lambda), c.box) - rho;
      value[t] = h_neg1_norm(diff, true);
      // W2(rho_bar, rho) <= W2(rho_bar, rho_eps) + W2(rho_eps, rho)
      const double w2 = w2_plan_cost_smeared(cfg, c.lambda).plan_cost +
                        w2_empirical_vs_density(density, cfg, c.ref_factor * n, sub_seed(c.seed, {kTagAux, j, t}));
      const double sup = std::max(smeared_density_sup(cfg, c.lambda), density.sup_norm());
      bound[t] = std::sqrt(sup) * w2;
    });
    std::size_t violations = 0;
    for (std::size_t t = 0; t < c.trials; ++t)
      if (value[t] > 1.05 * bound[t]) ++violations;
    const MeanSe mb = mean_se(bound);
    rep.rows.push_back(mean_row("|rho_bar - rho|_H-1", n, value, mb.mean));
    rep.rows.push_back(mean_row("sqrt(max sup) W2 bound", n, bound, kNaN));
    rep.checks.push_back({"H-1 norm <= 1.05 sqrt(max sup) W2" + n_tag(n), violations == 0,
                          std::to_string(violations) + " of " + std::to_string(c.trials) + " replicates exceed"});
  }
}

void run_corrector(const ExperimentConfig& c, unsigned threads, ScalingReport& rep) {
  const std::size_t m = c.n_list.size();
  std::vector<double> l2(m), grad(m), l3(m);
  parallel_for(m, threads, [&](std::size_t j) {
    const double eps = ParticleConfiguration::eps_for(c.n_list[j]);
    const CorrectorField field({Vec3::Zero()}, eps, c.alpha, {c.eta}, c.particle_radius);
    const double a = corrector_norm(field, CorrectorQuantity::kWMinusId, 2.0, 0);
    const double g = corrector_norm(field, CorrectorQuantity::kGradient, 2.0, 0);
    const double b = corrector_norm(field, CorrectorQuantity::kWMinusId, 3.0, 0);
    l2[j] = a * a;
    grad[j] = g * g;
    l3[j] = b * b * b;
  });
  double rmin = HUGE_VAL, rmax = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t n = c.n_list[j];
    const double eps = ParticleConfiguration::eps_for(n);
    const double ea = std::pow(eps, c.alpha);
    const double l3_ref = ea * ea * ea * std::abs(std::log(eps));
    rep.rows.push_back({"|w-Id|_L2^2", n, eps, l2[j], kNaN, kNaN, ea * ea, 1});
    rep.rows.push_back({"|grad w|_L2^2", n, eps, grad[j], kNaN, kNaN, ea, 1});
    rep.rows.push_back({"|w-Id|_L3^3", n, eps, l3[j], kNaN, kNaN, l3_ref, 1});
    rmin = std::min(rmin, l3[j] / l3_ref);
    rmax = std::max(rmax, l3[j] / l3_ref);
  }
  add_slope_check(rep, "|w-Id|_L2^2", "eps", 2.0 * c.alpha - 0.1, 2.0 * c.alpha + 0.1);
  add_slope_check(rep, "|grad w|_L2^2", "eps", c.alpha - 0.1, c.alpha + 0.1);
  rep.checks.push_back({"L3 ratio to eps^(3 alpha) |log eps| within a factor 3", rmax <= 3.0 * rmin,
                        "ratio range [" + fmt(rmin) + ", " + fmt(rmax) + "]"});
}

void run_resistance(const ExperimentConfig& c, unsigned threads, ScalingReport& rep) {
  const bool sphere = c.mesh.empty();
  ResistanceResult res;
  std::optional<double> reg;
  if (sphere) {
    const SurfaceMesh finest = icosphere(c.mesh_level, c.particle_radius);
    reg = c.reg_factor * mean_edge_length(finest);
    res = resistance_bem_sphere(c.particle_radius, c.mesh_level, reg, threads);
  } else {
    const ReferenceParticle particle = ReferenceParticle::from_mesh(read_mesh(c.mesh));
    reg = c.reg_factor * mean_edge_length(particle.surface(c.mesh_level));
    res = resistance_bem(particle, c.mesh_level, reg, threads);
  }
  const double stokes = 6.0 * std::numbers::pi * c.particle_radius;
  for (const auto& lvl : res.history) {
    const double asym = (lvl.R - lvl.R.transpose()).norm() / lvl.R.norm();
    rep.rows.push_back({"R_trace/3", lvl.vertices, lvl.mesh_spacing, lvl.R.trace() / 3.0, kNaN, kNaN,
                        sphere ? stokes : kNaN, 1});
    rep.rows.push_back({"R_asymmetry", lvl.vertices, lvl.mesh_spacing, asym, kNaN, kNaN, kNaN, 1});
  }
  if (sphere) {
    const double rel = (res.R - stokes * Mat3::Identity()).norm() / (stokes * std::sqrt(3.0));
    rep.checks.push_back({"R within 2% of 6 pi a I", rel <= 0.02, "relative Frobenius error " + fmt(rel)});
  }
  const double asym = (res.R - res.R.transpose()).norm() / res.R.norm();
  rep.checks.push_back({"R symmetric within 1%", asym <= 0.01, "asymmetry " + fmt(asym)});
}

void run_brinkman_gap(const ExperimentConfig& c, unsigned threads, ScalingReport& rep) {
  const DensityModel density = c.density.build();
  const Mat3 R = 6.0 * std::numbers::pi * c.particle_radius * Mat3::Identity();
  const TestField psi = TestField::gaussian(c.psi_center, c.psi_sigma, c.psi_amplitude);
  std::vector<double> ratios;
  for (std::size_t j = 0; j < c.n_list.size(); ++j) {
    const std::size_t n = c.n_list[j];
    const double eps = ParticleConfiguration::eps_for(n);
    std::vector<double> gap2(c.trials), sum(c.trials);
    parallel_for(c.trials, threads, [&](std::size_t t) {
      // Condition on well-separated holes: the corrector needs eta_i / 4 to
      // exceed the hole radius.
      for (std::uint64_t attempt = 0; attempt < DensityModel::kRejectionCap; ++attempt) {
        const ParticleConfiguration cfg = draw(density, n, c, j, t, attempt);
        if (!indicator_A(cfg, 1.0, c.alpha)) continue;
        const TruncationScales scales = truncation_scales(cfg, c.beta, c.m_eta);
        BrinkmanOptions opt;
        opt.lambda = c.lambda;
        opt.particle_radius = c.particle_radius;
        opt.w2_seed = sub_seed(c.seed, {kTagAux, j, t});
        opt.threads = 1;
        const BrinkmanGap g = brinkman_gap_pairing(cfg, scales, R, density, psi, c.box, opt);
        gap2[t] = g.gap * g.gap;
        sum[t] = g.parts.sum();
        return;
      }
      throw SamplingError("brinkman-gap: no separated configuration in 100 draws");
    });
    const double rms = std::sqrt(pairwise_sum(gap2) / static_cast<double>(c.trials));
    const MeanSe ms = mean_se(sum);
    const double ratio = rms / ms.mean;
    ratios.push_back(ratio);
    rep.rows.push_back({"gap_rms", n, eps, rms, kNaN, kNaN, ms.mean, c.trials});
    rep.rows.push_back(mean_row("bound_parts_sum", n, sum, kNaN));
    rep.rows.push_back({"gap_ratio", n, eps, ratio, kNaN, kNaN, kNaN, c.trials});
  }
  if (ratios.size() >= 2) {
    const double growth = ratios.back() / ratios.front();
    rep.checks.push_back({"gap ratio grows less than 3x", growth < 3.0, "growth " + fmt(growth)});
  }
}

}  // namespace

std::uint64_t sub_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  return RandomStream::derive(seed, path).next_u64();
}

ScalingReport run_experiment(const ExperimentConfig& config, unsigned threads) {
  validate(config);
  ScalingReport rep;
  rep.experiment = to_string(config.kind);
  rep.config_hash = config_hash(config);
  rep.seed = config.seed;
  rep.version = kVersion;
  switch (config.kind) {
    case ExperimentKind::kEvents: run_events(config, threads, rep); break;
    case ExperimentKind::kEtaMoments: run_eta_moments(config, threads, rep); break;
    case ExperimentKind::kW2Rates: run_w2_rates(config, threads, rep); break;
    case ExperimentKind::kHneg1: run_hneg1(config, threads, rep); break;
    case ExperimentKind::kCorrector: run_corrector(config, threads, rep); break;
    case ExperimentKind::kResistance: run_resistance(config, threads, rep); break;
    case ExperimentKind::kBrinkmanGap: run_brinkman_gap(config, threads, rep); break;
  }
  return rep;
}

}  // namespace phlab

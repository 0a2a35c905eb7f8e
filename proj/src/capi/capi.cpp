#include "phlab/phlab.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "phlab/common/error.hpp"
#include "phlab/common/version.hpp"
#include "phlab/events/estimate.hpp"
#include "phlab/events/eta_moment.hpp"
#include "phlab/events/indicators.hpp"
#include "phlab/experiment/config.hpp"
#include "phlab/experiment/report.hpp"
#include "phlab/experiment/runner.hpp"
#include "phlab/fields/brinkman.hpp"
#include "phlab/fields/grid.hpp"
#include "phlab/geometry/configuration.hpp"
#include "phlab/geometry/mesh.hpp"
#include "phlab/geometry/particle.hpp"
#include "phlab/geometry/truncation.hpp"
#include "phlab/oracles/suite.hpp"
#include "phlab/stokes/corrector.hpp"
#include "phlab/stokes/resistance.hpp"
#include "phlab/stokes/sphere_solution.hpp"
#include "phlab/transport/rate_fit.hpp"
#include "phlab/transport/transport.hpp"

struct phlab_density {
  phlab::DensityModel model;
};
struct phlab_configuration {
  phlab::ParticleConfiguration config;
};
struct phlab_grid {
  phlab::GridField field;
};
struct phlab_corrector {
  phlab::CorrectorField field;
};
struct phlab_config {
  phlab::ExperimentConfig config;
};
struct phlab_report {
  phlab::ScalingReport report;
};

namespace {

using namespace phlab;

thread_local std::string g_error;
thread_local std::string g_field;

phlab_status fail(phlab_status s, const char* what, const std::string& field = {}) {
  g_error = what;
  g_field = field;
  return s;
}

phlab_status map_kind(ErrorKind k) {
  switch (k) {
    case ErrorKind::kInvalidArgument: return PHLAB_E_INVALID_ARGUMENT;
    case ErrorKind::kDomain: return PHLAB_E_DOMAIN;
    case ErrorKind::kSizeCap: return PHLAB_E_SIZE_CAP;
    case ErrorKind::kNumerical: return PHLAB_E_NUMERICAL;
    case ErrorKind::kIo: return PHLAB_E_IO;
    case ErrorKind::kValidation: return PHLAB_E_VALIDATION;
    case ErrorKind::kSampling: return PHLAB_E_SAMPLING;
  }
  return PHLAB_E_INTERNAL;
}

template <typename F>
phlab_status guard(F&& f) {
  try {
    f();
    return PHLAB_OK;
  } catch (const ValidationError& e) {
    return fail(PHLAB_E_VALIDATION, e.what(), e.field());
  } catch (const Error& e) {
    return fail(map_kind(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(PHLAB_E_SIZE_CAP, "out of memory");
  } catch (const std::exception& e) {
    return fail(PHLAB_E_INTERNAL, e.what());
  } catch (...) {
    return fail(PHLAB_E_INTERNAL, "unknown exception");
  }
}

template <typename... P>
void need(const P*... ptrs) {
  if (((ptrs == nullptr) || ...)) throw InvalidArgument("null argument");
}

Vec3 v3(const double* p) { return Vec3(p[0], p[1], p[2]); }

std::vector<Vec3> points(const double* xyz, std::size_t n) {
  std::vector<Vec3> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = v3(xyz + 3 * i);
  return out;
}

void put(const Mat3& m, double* out) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[3 * i + j] = m(i, j);
}

void put(const Vec3& v, double* out) {
  for (int i = 0; i < 3; ++i) out[i] = v[i];
}

Mat3 mat(const double* p) {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = p[3 * i + j];
  return m;
}

BoxSpec box_of(const phlab_box* b) { return BoxSpec{v3(b->center), b->side, b->n}; }

phlab_status copy_string(const std::string& s, char* buf, size_t cap, size_t* needed) {
  if (needed) *needed = s.size() + 1;
  if (!buf || cap < s.size() + 1) return fail(PHLAB_E_BUFFER_TOO_SMALL, "buffer too small");
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return PHLAB_OK;
}

void put_fit(const RateFit& f, phlab_rate_fit* out) {
  *out = {f.slope, f.intercept, f.slope_se, f.slope_ci_low, f.slope_ci_high, f.r_squared, f.log_x.size()};
}

}  // namespace

extern "C" {

const char* phlab_version(void) { return kVersion; }
const char* phlab_last_error(void) { return g_error.c_str(); }
const char* phlab_last_error_field(void) { return g_field.c_str(); }

const char* phlab_status_name(phlab_status status) {
  switch (status) {
    case PHLAB_OK: return "ok";
    case PHLAB_E_INVALID_ARGUMENT: return "invalid argument";
    case PHLAB_E_DOMAIN: return "domain error";
    case PHLAB_E_SIZE_CAP: return "size cap exceeded";
    case PHLAB_E_NUMERICAL: return "numerical failure";
    case PHLAB_E_IO: return "i/o error";
    case PHLAB_E_VALIDATION: return "validation error";
    case PHLAB_E_SAMPLING: return "sampling failure";
    case PHLAB_E_BUFFER_TOO_SMALL: return "buffer too small";
    case PHLAB_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

// ---- densities

phlab_status phlab_density_uniform_box(const double lo[3], const double hi[3], phlab_density** out) {
  return guard([&] {
    need(lo, hi, out);
    *out = new phlab_density{DensityModel::uniform_box(v3(lo), v3(hi))};
  });
}

phlab_status phlab_density_uniform_ball(const double center[3], double radius, phlab_density** out) {
  return guard([&] {
    need(center, out);
    *out = new phlab_density{DensityModel::uniform_ball(v3(center), radius)};
  });
}

phlab_status phlab_density_piecewise_grid(const double lo[3], const double hi[3], const int dims[3],
                                          const double* weights, size_t count, phlab_density** out) {
  return guard([&] {
    need(lo, hi, dims, weights, out);
    *out = new phlab_density{DensityModel::piecewise_grid({v3(lo), v3(hi)}, {dims[0], dims[1], dims[2]},
                                                          std::vector<double>(weights, weights + count))};
  });
}

void phlab_density_free(phlab_density* density) { delete density; }

phlab_status phlab_density_sup_norm(const phlab_density* density, double* out) {
  return guard([&] {
    need(density, out);
    *out = density->model.sup_norm();
  });
}

phlab_status phlab_density_value(const phlab_density* density, const double x[3], double* out) {
  return guard([&] {
    need(density, x, out);
    *out = density->model(v3(x));
  });
}

phlab_status phlab_density_mass_in_box(const phlab_density* density, const double lo[3], const double hi[3],
                                       double* out) {
  return guard([&] {
    need(density, lo, hi, out);
    *out = density->model.mass_in_box({v3(lo), v3(hi)});
  });
}

// ---- configurations

phlab_status phlab_configuration_sample(const phlab_density* density, size_t n, uint64_t seed, double alpha,
                                        phlab_configuration** out) {
  return guard([&] {
    need(density, out);
    *out = new phlab_configuration{sample_configuration(density->model, n, seed, alpha)};
  });
}

phlab_status phlab_configuration_from_points(const double* xyz, size_t n, double alpha,
                                             phlab_configuration** out) {
  return guard([&] {
    need(xyz, out);
    *out = new phlab_configuration{ParticleConfiguration(points(xyz, n), alpha)};
  });
}

phlab_status phlab_configuration_load(const char* path, phlab_configuration** out) {
  return guard([&] {
    need(path, out);
    *out = new phlab_configuration{ParticleConfiguration::load(path)};
  });
}

phlab_status phlab_configuration_save(const phlab_configuration* config, const char* path) {
  return guard([&] {
    need(config, path);
    config->config.save(path);
  });
}

void phlab_configuration_free(phlab_configuration* config) { delete config; }
size_t phlab_configuration_size(const phlab_configuration* config) { return config ? config->config.size() : 0; }
double phlab_configuration_eps(const phlab_configuration* config) { return config ? config->config.eps() : 0.0; }

phlab_status phlab_configuration_centers(const phlab_configuration* config, double* xyz) {
  return guard([&] {
    need(config, xyz);
    for (std::size_t i = 0; i < config->config.size(); ++i) put(config->config.center(i), xyz + 3 * i);
  });
}

phlab_status phlab_configuration_nn_distances(const phlab_configuration* config, double* out) {
  return guard([&] {
    need(config, out);
    const auto& d = config->config.nn_distances();
    std::copy(d.begin(), d.end(), out);
  });
}

phlab_status phlab_truncation_scales(const phlab_configuration* config, double beta, double m_eta, double* out) {
  return guard([&] {
    need(config, out);
    const TruncationScales s = truncation_scales(config->config, beta, m_eta);
    std::copy(s.eta.begin(), s.eta.end(), out);
  });
}

// ---- events

phlab_status phlab_indicator_A(const phlab_configuration* config, double L, double alpha_thresh, int* out) {
  return guard([&] {
    need(config, out);
    *out = indicator_A(config->config, L, alpha_thresh) ? 1 : 0;
  });
}

phlab_status phlab_indicator_B(const phlab_configuration* config, double lambda, double rho_sup, int* out) {
  return guard([&] {
    need(config, out);
    *out = indicator_B(config->config, lambda, rho_sup) ? 1 : 0;
  });
}

phlab_status phlab_smeared_density_sup(const phlab_configuration* config, double lambda, double* out) {
  return guard([&] {
    need(config, out);
    *out = smeared_density_sup(config->config, lambda);
  });
}

phlab_status phlab_estimate_event(const phlab_density* density, phlab_event event, size_t n, size_t trials,
                                  uint64_t seed, double alpha, double param, unsigned threads,
                                  phlab_event_estimate* out) {
  return guard([&] {
    need(density, out);
    ConfigurationEvent ev;
    if (event == PHLAB_EVENT_A) {
      ev = [param, alpha](const ParticleConfiguration& c) { return indicator_A(c, param, alpha); };
    } else if (event == PHLAB_EVENT_B) {
      const double sup = density->model.sup_norm();
      ev = [param, sup](const ParticleConfiguration& c) { return indicator_B(c, param, sup); };
    } else {
      throw InvalidArgument("unknown event");
    }
    const EventEstimate e = estimate_event_probability(ev, density->model, n, trials, seed, alpha, threads);
    *out = {e.trials, e.successes, e.p_hat, e.ci_low, e.ci_high};
  });
}

phlab_status phlab_eta_moment_estimate(const phlab_density* density, size_t n, double beta, double m_eta,
                                       double kappa, size_t trials, phlab_eta_mode mode, uint64_t seed,
                                       unsigned threads, phlab_eta_moment* out) {
  return guard([&] {
    need(density, out);
    const EtaMode m = mode == PHLAB_ETA_LAYER_CAKE ? EtaMode::kLayerCake : EtaMode::kMonteCarlo;
    const EtaMomentResult r = eta_moment(density->model, n, beta, m_eta, kappa, trials, m, seed, threads);
    *out = {r.value, r.std_error, r.trials, r.exact_distribution ? 1 : 0};
  });
}

// ---- transport

phlab_status phlab_w2(const double* x, const double* a, size_t n, const double* y, const double* b, size_t m,
                      double* out) {
  return guard([&] {
    need(x, y, out);
    auto measure = [](const double* pts, const double* w, std::size_t k) {
      return w ? DiscreteMeasure(points(pts, k), std::vector<double>(w, w + k)) : DiscreteMeasure::uniform(points(pts, k));
    };
    *out = w2_assignment(measure(x, a, n), measure(y, b, m));
  });
}

phlab_status phlab_w2_plan_cost_smeared(const phlab_configuration* config, double lambda, double* plan_cost,
                                        double* bound) {
  return guard([&] {
    need(config, plan_cost, bound);
    const SmearedPlanCost r = w2_plan_cost_smeared(config->config, lambda);
    *plan_cost = r.plan_cost;
    *bound = r.bound;
  });
}

phlab_status phlab_w2_empirical_vs_density(const phlab_density* density, const phlab_configuration* config,
                                           size_t ref_samples, uint64_t seed, double* out) {
  return guard([&] {
    need(density, config, out);
    *out = w2_empirical_vs_density(density->model, config->config, ref_samples, seed);
  });
}

phlab_status phlab_fit_power_law(const double* x, const double* y, size_t n, phlab_rate_fit* out) {
  return guard([&] {
    need(x, y, out);
    std::vector<std::pair<double, double>> pts(n);
    for (std::size_t i = 0; i < n; ++i) pts[i] = {x[i], y[i]};
    put_fit(fit_power_law(pts), out);
  });
}

// ---- fields

phlab_status phlab_grid_from_points(const double* xyz, const double* w, size_t n, const phlab_box* box,
                                    phlab_grid** out) {
  return guard([&] {
    need(xyz, box, out);
    const DiscreteMeasure mu = w ? DiscreteMeasure(points(xyz, n), std::vector<double>(w, w + n))
                                 : DiscreteMeasure::uniform(points(xyz, n));
    *out = new phlab_grid{rasterize(mu, box_of(box))};
  });
}

phlab_status phlab_grid_from_smeared(const phlab_configuration* config, double lambda, const phlab_box* box,
                                     phlab_grid** out) {
  return guard([&] {
    need(config, box, out);
    *out = new phlab_grid{rasterize(SmearedDensity::from(config->config, lambda), box_of(box))};
  });
}

phlab_status phlab_grid_from_density(const phlab_density* density, const phlab_box* box, phlab_grid** out) {
  return guard([&] {
    need(density, box, out);
    *out = new phlab_grid{rasterize(density->model, box_of(box))};
  });
}

phlab_status phlab_grid_from_sphere_shell(const double center[3], double radius, const phlab_box* box,
                                          phlab_grid** out) {
  return guard([&] {
    need(center, box, out);
    *out = new phlab_grid{rasterize(SphereSurfaceMeasure{v3(center), radius}, box_of(box))};
  });
}

phlab_status phlab_grid_subtract(phlab_grid* a, const phlab_grid* b) {
  return guard([&] {
    need(a, b);
    a->field -= b->field;
  });
}

phlab_status phlab_grid_hneg1_norm(const phlab_grid* grid, int drop_zero_mode, double* out) {
  return guard([&] {
    need(grid, out);
    *out = h_neg1_norm(grid->field, drop_zero_mode != 0);
  });
}

phlab_status phlab_grid_integral(const phlab_grid* grid, double* out) {
  return guard([&] {
    need(grid, out);
    *out = grid->field.integral();
  });
}

phlab_status phlab_grid_values(const phlab_grid* grid, const double** values, size_t* count) {
  return guard([&] {
    need(grid, values, count);
    *values = grid->field.values().data();
    *count = grid->field.values().size();
  });
}

phlab_status phlab_grid_export(const phlab_grid* grid, const char* path) {
  return guard([&] {
    need(grid, path);
    export_grid(grid->field, path);
  });
}

phlab_status phlab_grid_import(const char* path, phlab_grid** out) {
  return guard([&] {
    need(path, out);
    *out = new phlab_grid{import_grid(path)};
  });
}

void phlab_grid_free(phlab_grid* grid) { delete grid; }

// ---- stokes

phlab_status phlab_sphere_stokes_eval(double a, int k, const double y[3], phlab_stokes_value* out) {
  return guard([&] {
    need(y, out);
    if (k < 0 || k > 2) throw InvalidArgument("k must be 0, 1 or 2");
    const SphereStokesValue v = sphere_stokes_eval(a, k, v3(y));
    put(v.velocity, out->velocity);
    out->pressure = v.pressure;
    put(v.gradient, out->gradient);
    put(v.stress, out->stress);
  });
}

phlab_status phlab_corrector_create(const phlab_configuration* config, double beta, double m_eta,
                                    double particle_radius, phlab_corrector** out) {
  return guard([&] {
    need(config, out);
    const TruncationScales s = truncation_scales(config->config, beta, m_eta);
    *out = new phlab_corrector{CorrectorField(config->config, s, ReferenceParticle::sphere(particle_radius))};
  });
}

phlab_status phlab_corrector_create_explicit(const double* centers, size_t n, double eps, double alpha,
                                             const double* eta, double particle_radius, phlab_corrector** out) {
  return guard([&] {
    need(centers, eta, out);
    *out = new phlab_corrector{
        CorrectorField(points(centers, n), eps, alpha, std::vector<double>(eta, eta + n), particle_radius)};
  });
}

phlab_status phlab_corrector_eval(const phlab_corrector* corrector, const double x[3], double w[9], int* region) {
  return guard([&] {
    need(corrector, x, w);
    const CorrectorValue v = corrector->field.eval(v3(x));
    put(v.w, w);
    if (region) *region = static_cast<int>(v.region);
  });
}

phlab_status phlab_corrector_norm(const phlab_corrector* corrector, phlab_corrector_quantity quantity, double p,
                                  size_t particle, double* out) {
  return guard([&] {
    need(corrector, out);
    CorrectorQuantity q;
    switch (quantity) {
      case PHLAB_CORRECTOR_W_MINUS_ID: q = CorrectorQuantity::kWMinusId; break;
      case PHLAB_CORRECTOR_GRADIENT: q = CorrectorQuantity::kGradient; break;
      case PHLAB_CORRECTOR_PRESSURE: q = CorrectorQuantity::kPressure; break;
      default: throw InvalidArgument("unknown corrector quantity");
    }
    *out = corrector_norm(corrector->field, q, p, particle);
  });
}

void phlab_corrector_free(phlab_corrector* corrector) { delete corrector; }

static void put_resistance(const ResistanceResult& r, phlab_resistance* out) {
  put(r.R, out->R);
  out->vertices = r.vertices;
  out->faces = r.faces;
  out->mesh_spacing = r.mesh_spacing;
  out->reg_eps = r.reg_eps;
}

phlab_status phlab_resistance_sphere(double radius, int level, double reg_eps, unsigned threads,
                                     phlab_resistance* out) {
  return guard([&] {
    need(out);
    const std::optional<double> reg = reg_eps > 0.0 ? std::optional<double>(reg_eps) : std::nullopt;
    put_resistance(resistance_bem_sphere(radius, level, reg, threads), out);
  });
}

phlab_status phlab_resistance_mesh_file(const char* path, int level, double reg_eps, unsigned threads,
                                        phlab_resistance* out) {
  return guard([&] {
    need(path, out);
    const ReferenceParticle particle = ReferenceParticle::from_mesh(read_mesh(path));
    const std::optional<double> reg = reg_eps > 0.0 ? std::optional<double>(reg_eps) : std::nullopt;
    put_resistance(resistance_bem(particle, level, reg, threads), out);
  });
}

phlab_status phlab_brinkman_gap_gaussian(const phlab_configuration* config, double beta, double m_eta,
                                         const double R[9], const phlab_density* density,
                                         const double psi_center[3], double sigma, const double amplitude[3],
                                         const phlab_box* box, double lambda, double particle_radius, double w2,
                                         uint64_t w2_seed, unsigned threads, phlab_brinkman_gap* out) {
  return guard([&] {
    need(config, R, density, psi_center, amplitude, box, out);
    const TruncationScales s = truncation_scales(config->config, beta, m_eta);
    BrinkmanOptions opt;
    opt.lambda = lambda;
    opt.particle_radius = particle_radius;
    if (w2 >= 0.0) opt.w2 = w2;
    opt.w2_seed = w2_seed;
    opt.threads = threads;
    const BrinkmanGap g = brinkman_gap_pairing(config->config, s, mat(R), density->model,
                                               TestField::gaussian(v3(psi_center), sigma, v3(amplitude)),
                                               box_of(box), opt);
    out->gap = g.gap;
    put(g.column_gap, out->column_gap);
    put(g.m_pairing, out->m_pairing);
    put(g.rho_r_pairing, out->rho_r_pairing);
    out->w2_term = g.parts.w2_term;
    out->smear_term = g.parts.smear_term;
    out->cube_h1_term = g.parts.cube_h1_term;
    out->cube_l2_term = g.parts.cube_l2_term;
    out->w2 = g.parts.w2;
    out->psi_h1 = g.parts.psi_h1;
  });
}

// ---- experiments

phlab_status phlab_config_load(const char* path, phlab_config** out) {
  return guard([&] {
    need(path, out);
    *out = new phlab_config{load_config(path)};
  });
}

phlab_status phlab_config_parse(const char* json, phlab_config** out) {
  return guard([&] {
    need(json, out);
    *out = new phlab_config{config_from_json(json)};
  });
}

phlab_status phlab_config_validate(const phlab_config* config) {
  return guard([&] {
    need(config);
    validate(config->config);
  });
}

phlab_status phlab_config_hash(const phlab_config* config, uint64_t* out) {
  return guard([&] {
    need(config, out);
    *out = config_hash(config->config);
  });
}

const char* phlab_config_output(const phlab_config* config) { return config ? config->config.output.c_str() : ""; }

phlab_status phlab_config_set_output(phlab_config* config, const char* path) {
  return guard([&] {
    need(config, path);
    config->config.output = path;
  });
}

phlab_status phlab_config_to_json(const phlab_config* config, char* buf, size_t cap, size_t* needed) {
  if (!config) return fail(PHLAB_E_INVALID_ARGUMENT, "null argument");
  std::string s;
  const phlab_status st = guard([&] { s = config_to_json(config->config); });
  return st == PHLAB_OK ? copy_string(s, buf, cap, needed) : st;
}

void phlab_config_free(phlab_config* config) { delete config; }

phlab_status phlab_run(const phlab_config* config, unsigned threads, phlab_report** out) {
  return guard([&] {
    need(config, out);
    *out = new phlab_report{run_experiment(config->config, threads)};
  });
}

phlab_status phlab_run_oracles(const phlab_config* config, unsigned threads, phlab_report** out) {
  return guard([&] {
    need(config, out);
    *out = new phlab_report{run_oracles(config->config, threads)};
  });
}

phlab_status phlab_report_write(const phlab_report* report, const char* path) {
  return guard([&] {
    need(report, path);
    append_tsv(report->report, path);
    write_sidecar(report->report, std::string(path) + ".json");
  });
}

phlab_status phlab_report_tsv(const phlab_report* report, char* buf, size_t cap, size_t* needed) {
  if (!report) return fail(PHLAB_E_INVALID_ARGUMENT, "null argument");
  return copy_string(format_tsv(report->report), buf, cap, needed);
}

phlab_status phlab_report_sidecar(const phlab_report* report, char* buf, size_t cap, size_t* needed) {
  if (!report) return fail(PHLAB_E_INVALID_ARGUMENT, "null argument");
  return copy_string(format_sidecar(report->report), buf, cap, needed);
}

int phlab_report_all_passed(const phlab_report* report) { return report && report->report.all_checks_passed(); }
size_t phlab_report_row_count(const phlab_report* report) { return report ? report->report.rows.size() : 0; }
size_t phlab_report_check_count(const phlab_report* report) { return report ? report->report.checks.size() : 0; }
size_t phlab_report_fit_count(const phlab_report* report) { return report ? report->report.fits.size() : 0; }

phlab_status phlab_report_check(const phlab_report* report, size_t i, const char** name, int* passed,
                                const char** detail) {
  return guard([&] {
    need(report);
    if (i >= report->report.checks.size()) throw InvalidArgument("report: check index out of range");
    const auto& c = report->report.checks[i];
    if (name) *name = c.name.c_str();
    if (passed) *passed = c.passed ? 1 : 0;
    if (detail) *detail = c.detail.c_str();
  });
}

phlab_status phlab_report_fit(const phlab_report* report, size_t i, const char** statistic, const char** abscissa,
                              phlab_rate_fit* out) {
  return guard([&] {
    need(report);
    if (i >= report->report.fits.size()) throw InvalidArgument("report: fit index out of range");
    const auto& f = report->report.fits[i];
    if (statistic) *statistic = f.statistic.c_str();
    if (abscissa) *abscissa = f.abscissa.c_str();
    if (out) put_fit(f.fit, out);
  });
}

void phlab_report_free(phlab_report* report) { delete report; }

phlab_status phlab_report_recompute(const char* path, phlab_report** out) {
  return guard([&] {
    need(path, out);
    const std::vector<ScalingReport> all = recompute_reports(path);
    ScalingReport merged;
    merged.experiment = "recompute";
    merged.version = kVersion;
    for (const auto& rep : all) {
      const std::string prefix = hex64(rep.config_hash) + " " + rep.experiment + ": ";
      for (auto r : rep.rows) {
        r.statistic = prefix + r.statistic;
        merged.rows.push_back(std::move(r));
      }
      for (auto f : rep.fits) {
        f.statistic = prefix + f.statistic;
        merged.fits.push_back(std::move(f));
      }
    }
    *out = new phlab_report{std::move(merged)};
  });
}

}  // extern "C"

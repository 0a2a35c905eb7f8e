// Acceptance criteria, one per invocation: `acceptance <1..13>`.
// Prints "criterion N: PASS|FAIL  <detail>" and exits 0 on PASS.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include "phlab/common/rng.hpp"
#include "phlab/experiment/config.hpp"
#include "phlab/experiment/report.hpp"
#include "phlab/experiment/runner.hpp"
#include "phlab/fields/grid.hpp"
#include "phlab/geometry/neighbors.hpp"
#include "phlab/oracles/brute.hpp"
#include "phlab/stokes/resistance.hpp"
#include "phlab/transport/transport.hpp"
#include "small_configs.hpp"

using namespace phlab;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void add(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const DensityModel kCube = DensityModel::uniform_box(Vec3::Zero(), Vec3::Ones());

ExperimentConfig base(ExperimentKind kind, std::vector<std::size_t> n, std::size_t trials, std::uint64_t seed) {
  ExperimentConfig c;
  c.kind = kind;
  c.n_list = std::move(n);
  c.trials = trials;
  c.seed = seed;
  return c;
}

// Copies every runner check whose name contains `filter` into the outcome.
void take_checks(Outcome& o, const ScalingReport& r, const std::string& filter = "") {
  for (const auto& ch : r.checks)
    if (ch.name.find(filter) != std::string::npos) o.add(ch.passed, ch.name + ": " + ch.detail);
}

Outcome stokes_law() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = resistance_bem_sphere(1.0, 4);
  const double t = seconds_since(t0);
  const Mat3 ref = 6 * pi * Mat3::Identity();
  const double rel = (r.R - ref).norm() / ref.norm();
  o.add(rel <= 0.02, "relative error " + fmt("%.4g", rel) + " <= 0.02");
  o.add(t < 60.0, "runtime " + fmt("%.1f", t) + " s < 60 s");
  return o;
}

Outcome traction() {
  Outcome o;
  const double a = 1.0;
  for (double R : {2 * a, 4 * a, 8 * a})
    for (int k = 0; k < 3; ++k) {
      const Vec3 f = oracle::sphere_traction(a, k, R, 256);
      const double rel = (f - 6 * pi * a * Vec3::Unit(k)).norm() / (6 * pi * a);
      if (k == 0 || rel > 5e-3) o.add(rel <= 5e-3, "R=" + fmt("%g", R) + " k=" + std::to_string(k) + " rel " + fmt("%.2e", rel));
    }
  return o;
}

Outcome corrector_scalings() {
  Outcome o;
  auto c = base(ExperimentKind::kCorrector, {4096, 32768, 262144, 2097152, 16777216}, 1, 1);
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_experiment(c);
  const double t = seconds_since(t0);
  take_checks(o, r);
  o.add(t < 300.0, "sweep " + fmt("%.1f", t) + " s < 300 s");
  return o;
}

Outcome nn_scaling() {
  Outcome o;
  const auto r = run_experiment(base(ExperimentKind::kEvents, {1000, 10000, 100000}, 200, 4));
  take_checks(o, r, "E[d1]");
  std::size_t mismatches = 0;
  for (std::uint64_t s = 0; s < 40; ++s) {
    const std::size_t n = 2 + (s * 997) % 1999;
    const auto cfg = sample_configuration(kCube, n, 1000 + s);
    if (nearest_neighbor_distances(cfg.centers()) != oracle::nn_distances(cfg.centers())) ++mismatches;
  }
  o.add(mismatches == 0, "spatial hash == brute force on 40 configurations, N <= 2000 (" + std::to_string(mismatches) + " mismatches)");
  return o;
}

Outcome event_a() {
  Outcome o;
  take_checks(o, run_experiment(base(ExperimentKind::kEvents, {1000, 10000}, 2000, 5)), "P[A]");
  return o;
}

Outcome event_b() {
  Outcome o;
  take_checks(o, run_experiment(base(ExperimentKind::kEvents, {10000}, 500, 6)), "P[B]");
  return o;
}

Outcome eta_moments() {
  Outcome o;
  auto c = base(ExperimentKind::kEtaMoments, {1000, 10000, 100000}, 2000, 7);
  c.m_eta = 0.5;
  take_checks(o, run_experiment(c));
  return o;
}

Outcome plan_bound() {
  Outcome o;
  std::size_t bad = 0;
  double worst = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto cfg = sample_configuration(kCube, 10 + 97 * s, 300 + s);
    const auto p = w2_plan_cost_smeared(cfg, 0.3);
    worst = std::max(worst, p.plan_cost / p.bound);
    if (!(p.plan_cost <= p.bound)) ++bad;
  }
  o.add(bad == 0, "plan_cost <= sqrt(3) eps^(1-lambda) on 100 configurations, worst ratio " + fmt("%.4f", worst));

  // exact W2 between the atoms and a cube-centred discretization of the
  // smeared density (N m^3 <= 512 points)
  const double tol = 1e-12;
  double margin = HUGE_VAL;
  for (std::size_t n : {1u, 2u, 4u, 8u})
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto cfg = sample_configuration(kCube, n, 500 + s);
      const auto p = w2_plan_cost_smeared(cfg, 0.3);
      const int m = 4;
      std::vector<Vec3> sub;
      for (const auto& x : cfg.centers())
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
              sub.push_back(x + p.cube_side * (Vec3(i + 0.5, j + 0.5, k + 0.5) / m - Vec3::Constant(0.5)));
      const DiscreteMeasure a(cfg.centers(), std::vector<double>(n, 1.0 / n));
      const DiscreteMeasure b(sub, std::vector<double>(sub.size(), 1.0 / sub.size()));
      margin = std::min(margin, p.plan_cost + tol - w2_assignment(a, b));
    }
  o.add(margin >= 0.0, "exact W2 <= plan_cost + 1e-12 for n <= 512, smallest margin " + fmt("%.3g", margin));
  return o;
}

Outcome w2_rate() {
  Outcome o;
  auto c = base(ExperimentKind::kW2Rates, {128, 256, 512, 1024, 2048}, 50, 11);
  c.ref_factor = 16;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_experiment(c);
  const double t = seconds_since(t0);
  take_checks(o, r, "slope");
  o.add(t < 600.0, "runtime " + fmt("%.1f", t) + " s < 600 s");
  return o;
}

Outcome w2_hneg1() {
  Outcome o;
  RandomStream rng(2024, 10);
  const Box unit{};
  const BoxSpec grid{Vec3::Constant(0.5), 2.0, 64};
  auto discretize = [](const DensityModel& d) {
    std::vector<Vec3> p;
    std::vector<double> w;
    double total = 0;
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j)
        for (int k = 0; k < 8; ++k) {
          const Vec3 x((i + 0.5) / 8, (j + 0.5) / 8, (k + 0.5) / 8);
          p.push_back(x);
          w.push_back(d(x));
          total += d(x);
        }
    for (double& v : w) v /= total;
    return DiscreteMeasure(p, w);
  };
  double worst = 0;
  for (int t = 0; t < 200; ++t) {
    std::vector<double> w0(8), w1(8);
    for (auto& v : w0) v = rng.uniform(0.05, 1.0);
    for (auto& v : w1) v = rng.uniform(0.05, 1.0);
    const auto d0 = DensityModel::piecewise_grid(unit, {2, 2, 2}, w0);
    const auto d1 = DensityModel::piecewise_grid(unit, {2, 2, 2}, w1);
    const double w2 = w2_assignment(discretize(d0), discretize(d1));
    const double h = h_neg1_norm(rasterize(d0, grid) - rasterize(d1, grid));
    worst = std::max(worst, h / (std::sqrt(std::max(d0.sup_norm(), d1.sup_norm())) * w2));
  }
  o.add(worst <= 1.05, "H-1 <= sqrt(max sup) W2 on 200 pairs, worst ratio " + fmt("%.4f", worst) + " <= 1.05");

  double err = 0;
  for (int kx : {1, 2, 3}) {
    GridField f(grid);
    const int n = grid.n;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          f.at(i, j, k) = std::sin(2 * pi * kx * (grid.cell_center(i, j, k).x() - grid.lo().x()) / grid.side);
    const double exact = oracle::single_mode_hneg1(1.0, Vec3(kx, 0, 0), grid.side);
    err = std::max(err, std::abs(h_neg1_norm(f) / exact - 1));
  }
  o.add(err <= 1e-6, "single mode relative error " + fmt("%.2e", err) + " <= 1e-6");
  return o;
}

Outcome brinkman() {
  Outcome o;
  auto c = base(ExperimentKind::kBrinkmanGap, {1000, 10000}, 10, 42);
  c.m_eta = 0.5;
  c.box = {Vec3::Constant(0.5), 2.0, 64};
  take_checks(o, run_experiment(c));
  return o;
}

Outcome simplex_exact() {
  Outcome o;
  double worst = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    RandomStream rng(77, t);
    const std::size_t n = 1 + t % 6;
    std::vector<Vec3> x(n), y(n);
    for (auto& p : x) p = Vec3(rng.uniform(), rng.uniform(), rng.uniform());
    for (auto& p : y) p = Vec3(rng.uniform(), rng.uniform(), rng.uniform());
    const double w = w2_assignment(DiscreteMeasure::uniform(x), DiscreteMeasure::uniform(y));
    const double b = oracle::w2_squared_permutations(x, y);
    worst = std::max(worst, std::abs(w * w - b) / std::max(b, 1e-300));
  }
  o.add(worst <= 1e-12, "100 instances n <= 6, worst relative discrepancy " + fmt("%.2e", worst));
  return o;
}

Outcome determinism() {
  Outcome o;
  for (auto kind : testing::all_kinds()) {
    const auto c = testing::small_config(kind);
    const auto a = run_experiment(c, 1);
    const auto b = run_experiment(c, 3);
    const auto d = run_experiment(c, 8);
    const bool same = format_tsv(a) == format_tsv(b) && format_tsv(a) == format_tsv(d) &&
                      format_sidecar(a) == format_sidecar(b) && format_sidecar(a) == format_sidecar(d);
    o.add(same, std::string(to_string(kind)) + (same ? " identical" : " differs") + " at 1/3/8 threads");
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::function<Outcome()> criteria[] = {stokes_law, traction,     corrector_scalings, nn_scaling, event_a,
                                               event_b,    eta_moments,  plan_bound,         w2_rate,    w2_hneg1,
                                               brinkman,   simplex_exact, determinism};
  const int n = argc > 1 ? std::atoi(argv[1]) : 0;
  if (n < 1 || n > 13) {
    std::fprintf(stderr, "usage: acceptance <1..13>\n");
    return 2;
  }
  Outcome o;
  try {
    o = criteria[n - 1]();
  } catch (const std::exception& e) {
    o.add(false, std::string("exception: ") + e.what());
  }
  std::printf("criterion %d: %s  %s\n", n, o.pass ? "PASS" : "FAIL", o.detail.c_str());
  return o.pass ? 0 : 1;
}

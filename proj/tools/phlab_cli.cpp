// Command-line front end. Talks to the library only through the C interface.
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "phlab/phlab.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitValidation = 2;
constexpr int kExitBound = 3;

int report_error(phlab_status st) {
  std::fprintf(stderr, "error: %s: %s\n", phlab_status_name(st), phlab_last_error());
  return st == PHLAB_E_VALIDATION ? kExitValidation : kExitError;
}

void print_checks(const phlab_report* r) {
  for (size_t i = 0; i < phlab_report_check_count(r); ++i) {
    const char *name = nullptr, *detail = nullptr;
    int passed = 0;
    phlab_report_check(r, i, &name, &passed, &detail);
    std::printf("%s  %s: %s\n", passed ? "PASS" : "FAIL", name, detail);
  }
}

void print_fits(const phlab_report* r) {
  for (size_t i = 0; i < phlab_report_fit_count(r); ++i) {
    const char *stat = nullptr, *abscissa = nullptr;
    phlab_rate_fit f{};
    phlab_report_fit(r, i, &stat, &abscissa, &f);
    std::printf("fit  %s vs %s: slope %.6g  95%% ci [%.6g, %.6g]  r2 %.4f  (%zu points)\n", stat, abscissa, f.slope,
                f.slope_ci_low, f.slope_ci_high, f.r_squared, f.points);
  }
}

struct ConfigHandle {
  phlab_config* p = nullptr;
  ~ConfigHandle() { phlab_config_free(p); }
};
struct ReportHandle {
  phlab_report* p = nullptr;
  ~ReportHandle() { phlab_report_free(p); }
};

int load_validated(const std::string& path, ConfigHandle& cfg) {
  phlab_status st = phlab_config_load(path.c_str(), &cfg.p);
  if (st != PHLAB_OK) return report_error(st);
  st = phlab_config_validate(cfg.p);
  if (st != PHLAB_OK) return report_error(st);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Particle homogenization numerics lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(phlab_version()));

  unsigned threads = 0;
  bool strict = false;
  std::string config_path, output, report_path;

  auto* run = app.add_subcommand("run", "Run the experiment pipeline of a config and append its report");
  run->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--output", output, "Report table path (overrides the config)");
  auto* validate = app.add_subcommand("validate", "Check a config without running it");
  validate->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  auto* oracle = app.add_subcommand("oracle", "Run only the brute-force cross-checks for a config");
  oracle->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  auto* report = app.add_subcommand("report", "Recompute fits from a stored report table");
  report->add_option("path", report_path, "Report table (TSV)")->required()->check(CLI::ExistingFile);
  for (auto* sub : {run, oracle}) {
    sub->add_option("-t,--threads", threads, "Worker threads (0 = all cores)");
    sub->add_flag("--strict", strict, "Exit with status 3 when a check fails");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  if (*validate) {
    ConfigHandle cfg;
    if (const int rc = load_validated(config_path, cfg)) return rc;
    uint64_t hash = 0;
    phlab_config_hash(cfg.p, &hash);
    std::printf("ok %016llx\n", static_cast<unsigned long long>(hash));
    return kExitOk;
  }

  if (*run || *oracle) {
    ConfigHandle cfg;
    if (const int rc = load_validated(config_path, cfg)) return rc;
    ReportHandle rep;
    const phlab_status st = *run ? phlab_run(cfg.p, threads, &rep.p) : phlab_run_oracles(cfg.p, threads, &rep.p);
    if (st != PHLAB_OK) return report_error(st);
    if (*run) {
      const std::string path = output.empty() ? std::string(phlab_config_output(cfg.p)) : output;
      if (const phlab_status ws = phlab_report_write(rep.p, path.c_str()); ws != PHLAB_OK) return report_error(ws);
      std::printf("report appended to %s (sidecar %s.json)\n", path.c_str(), path.c_str());
    }
    print_fits(rep.p);
    print_checks(rep.p);
    if (strict && !phlab_report_all_passed(rep.p)) return kExitBound;
    return kExitOk;
  }

  if (*report) {
    ReportHandle rep;
    const phlab_status st = phlab_report_recompute(report_path.c_str(), &rep.p);
    if (st != PHLAB_OK) return report_error(st);
    std::printf("%zu rows\n", phlab_report_row_count(rep.p));
    print_fits(rep.p);
    return kExitOk;
  }
  return kExitError;
}

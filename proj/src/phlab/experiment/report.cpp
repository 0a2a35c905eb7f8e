#include "phlab/experiment/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "phlab/common/error.hpp"
#include "phlab/experiment/config.hpp"

namespace phlab {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// JSON has no NaN; those become null.
nlohmann::ordered_json jnum(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

double parse_num(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument(s);
  return v;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) return out;
    start = tab + 1;
  }
}

}  // namespace

bool ScalingReport::all_checks_passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

std::optional<ReportFit> ScalingReport::fit(const std::string& statistic, const std::string& abscissa) const {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rows) {
    if (r.statistic != statistic || !(r.value > 0.0)) continue;
    pts.emplace_back(abscissa == "eps" ? r.eps : static_cast<double>(r.n), r.value);
  }
  if (pts.size() < 3) return std::nullopt;
  try {
    return ReportFit{statistic, abscissa, fit_power_law(pts)};
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::string format_tsv(const ScalingReport& report) {
  std::ostringstream out;
  const std::string hash = hex64(report.config_hash);
  out << "# provenance config_hash=" << hash << " seed=" << report.seed << " version=" << report.version
      << " experiment=" << report.experiment << "\n";
  for (const auto& r : report.rows) {
    out << hash << '\t' << report.experiment << '\t' << r.statistic << '\t' << r.n << '\t' << num(r.eps) << '\t'
        << num(r.value) << '\t' << num(r.ci_low) << '\t' << num(r.ci_high) << '\t' << num(r.bound) << '\t'
        << r.replicates << '\n';
  }
  for (const auto& f : report.fits) {
    out << "# fit " << f.statistic << " vs " << f.abscissa << ": slope=" << num(f.fit.slope) << " ci=["
        << num(f.fit.slope_ci_low) << ", " << num(f.fit.slope_ci_high) << "] r2=" << num(f.fit.r_squared) << "\n";
  }
  for (const auto& c : report.checks)
    out << "# check " << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
  return out.str();
}

void append_tsv(const ScalingReport& report, const std::filesystem::path& path) {
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for appending");
  if (fresh) out << kReportColumns << "\n";
  out << format_tsv(report);
  if (!out) throw IoError("write failed: " + path.string());
}

std::string format_sidecar(const ScalingReport& report) {
  nlohmann::ordered_json j;
  j["provenance"] = {{"config_hash", hex64(report.config_hash)},
                     {"seed", report.seed},
                     {"version", report.version},
                     {"experiment", report.experiment}};
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : report.rows)
    rows.push_back({{"statistic", r.statistic},
                    {"N", r.n},
                    {"eps", jnum(r.eps)},
                    {"value", jnum(r.value)},
                    {"ci_low", jnum(r.ci_low)},
                    {"ci_high", jnum(r.ci_high)},
                    {"bound", jnum(r.bound)},
                    {"replicates", r.replicates}});
  j["rows"] = rows;
  auto fits = nlohmann::ordered_json::array();
  for (const auto& f : report.fits)
    fits.push_back({{"statistic", f.statistic},
                    {"abscissa", f.abscissa},
                    {"slope", jnum(f.fit.slope)},
                    {"slope_ci", {jnum(f.fit.slope_ci_low), jnum(f.fit.slope_ci_high)}},
                    {"slope_se", jnum(f.fit.slope_se)},
                    {"intercept", jnum(f.fit.intercept)},
                    {"r_squared", jnum(f.fit.r_squared)},
                    {"points", f.fit.log_x.size()}});
  j["fits"] = fits;
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["checks"] = checks;
  j["all_checks_passed"] = report.all_checks_passed();
  return j.dump(2) + "\n";
}

void write_sidecar(const ScalingReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << format_sidecar(report);
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<ScalingReport> recompute_reports(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<ScalingReport> reports;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  std::map<std::string, std::uint64_t> seeds;  // by hash, from provenance lines
  std::map<std::string, std::string> versions;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# provenance", 0) == 0) {
        std::istringstream ls(line.substr(12));
        std::string tok, hash;
        std::uint64_t seed = 0;
        std::string version;
        while (ls >> tok) {
          const auto eq = tok.find('=');
          if (eq == std::string::npos) continue;
          const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
          if (key == "config_hash") hash = val;
          else if (key == "seed") seed = std::stoull(val);
          else if (key == "version") version = val;
        }
        seeds[hash] = seed;
        versions[hash] = version;
      }
      continue;
    }
    if (line == kReportColumns) continue;
    const auto f = split_tabs(line);
    if (f.size() != 10) throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected 10 columns");
    ReportRow r;
    try {
      r.statistic = f[2];
      r.n = std::stoull(f[3]);
      r.eps = parse_num(f[4]);
      r.value = parse_num(f[5]);
      r.ci_low = parse_num(f[6]);
      r.ci_high = parse_num(f[7]);
      r.bound = parse_num(f[8]);
      r.replicates = std::stoull(f[9]);
    } catch (const std::exception&) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": malformed row");
    }
    const auto key = std::make_pair(f[0], f[1]);
    auto it = index.find(key);
    if (it == index.end()) {
      ScalingReport rep;
      rep.experiment = f[1];
      rep.config_hash = std::stoull(f[0], nullptr, 16);
      rep.seed = seeds.count(f[0]) ? seeds[f[0]] : 0;
      rep.version = versions.count(f[0]) ? versions[f[0]] : "";
      it = index.emplace(key, reports.size()).first;
      reports.push_back(std::move(rep));
    }
    reports[it->second].rows.push_back(std::move(r));
  }
  for (auto& rep : reports) {
    const std::string abscissa = rep.experiment == "corrector" ? "eps" : "N";
    std::vector<std::string> stats;
    for (const auto& r : rep.rows)
      if (std::find(stats.begin(), stats.end(), r.statistic) == stats.end()) stats.push_back(r.statistic);
    for (const auto& s : stats)
      if (auto f = rep.fit(s, abscissa)) rep.fits.push_back(std::move(*f));
  }
  return reports;
}

}  // namespace phlab

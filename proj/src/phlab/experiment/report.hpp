#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "phlab/transport/rate_fit.hpp"

namespace phlab {

/// One table row. Missing numbers are NaN and are written as "nan".
struct ReportRow {
  std::string statistic;
  std::size_t n = 0;
  double eps = 0.0;
  double value = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double bound = 0.0;  // reference value the statistic is compared against
  std::size_t replicates = 0;
};

struct ReportFit {
  std::string statistic;
  std::string abscissa;  // "N" or "eps"
  RateFit fit;
};

struct ReportCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ScalingReport {
  std::string experiment;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::string version;
  std::vector<ReportRow> rows;
  std::vector<ReportFit> fits;
  std::vector<ReportCheck> checks;

  bool all_checks_passed() const;
  /// Fits statistic ~ abscissa^slope over the rows carrying `statistic`.
  /// Returns nothing when fewer than 3 rows have positive values.
  std::optional<ReportFit> fit(const std::string& statistic, const std::string& abscissa) const;
};

/// Column header of the table.
inline constexpr const char* kReportColumns =
    "config_hash\texperiment\tstatistic\tN\teps\tvalue\tci_low\tci_high\tbound\treplicates";

/// Tab-separated rows rendered with %.17g; a "# provenance" comment block
/// precedes them. Deterministic for a given report.
std::string format_tsv(const ScalingReport& report);
/// Appends format_tsv to `path`, writing the column header if the file is new.
void append_tsv(const ScalingReport& report, const std::filesystem::path& path);
/// Structured sidecar with provenance, rows, fits and checks.
std::string format_sidecar(const ScalingReport& report);
void write_sidecar(const ScalingReport& report, const std::filesystem::path& path);

/// Reads every report stored in a table (grouped by config hash and
/// experiment, in file order) and recomputes the fits from the rows. The
/// abscissa is eps for corrector rows and N otherwise.
std::vector<ScalingReport> recompute_reports(const std::filesystem::path& path);

}  // namespace phlab

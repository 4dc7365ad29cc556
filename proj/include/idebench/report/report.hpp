#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "idebench/driver/driver.hpp"

namespace idebench {

/// Column names of the detailed per-query table, in emission order.
const std::vector<std::string>& detailed_columns();

/// Per-query table: one row per record, two-decimal reals, empty cells
/// for undefined values, TRUE/FALSE booleans.
std::string detailed_csv(const std::vector<QueryRecord>& records);
std::vector<QueryRecord> parse_detailed_csv(const std::string& text);
std::vector<QueryRecord> load_detailed_csv(const std::string& path);

/// Data preparation time of one benchmark run (load + adapter setup).
struct PrepInfo {
  std::string adapter;
  uint64_t data_size = 0;
  double seconds = 0.0;
};

/// Aggregates for one (adapter, time requirement, workflow type) group.
/// The error distribution covers only queries that met their deadline;
/// the violation rate and missing-bin mean cover all of them.
struct SummaryCell {
  std::string adapter;
  double time_requirement_s = 0.0;
  std::string workflow_type;
  size_t queries = 0;
  size_t violations = 0;
  double tr_violation_rate = 0.0;
  std::optional<double> mean_missing_bins;
  /// Cumulative fraction of per-query mean relative errors at 200
  /// evenly spaced levels on [0,1]; errors above 1 stay in the
  /// denominator, so the curve may top out below 1.
  std::vector<std::pair<double, double>> mre_cdf;
  std::optional<double> area_above_curve;
  std::optional<double> prep_seconds;
};

struct SummaryReport {
  std::vector<SummaryCell> cells;  // sorted by (adapter, tr, type)
  std::vector<PrepInfo> prep;
};

SummaryReport summarize(const std::vector<QueryRecord>& records,
                        const std::vector<PrepInfo>& prep);

nlohmann::json summary_to_json(const SummaryReport& report);

/// Line chart of every cell's truncated error CDF with the area above
/// the curve annotated in the legend.
std::string summary_svg(const SummaryReport& report);

/// Writes detailed.csv, summary.json, and summary.svg under out_dir.
void write_reports(const std::vector<QueryRecord>& records,
                   const std::vector<PrepInfo>& prep,
                   const std::string& out_dir);

}  // namespace idebench

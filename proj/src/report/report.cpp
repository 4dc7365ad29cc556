#include "idebench/report/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <tuple>

#include "idebench/data/csv.hpp"

namespace idebench {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Detailed table

const std::vector<std::string>& detailed_columns() {
  static const std::vector<std::string> kColumns = {
      "id",           "interaction",    "viz_name",      "driver",
      "data_size",    "think_time",     "time_requirement", "workflow",
      "start_time",   "end_time",       "tr_violated",   "bin_dims",
      "binning_type", "agg_type",       "bins_ofm",      "bins_delivered",
      "bins_in_gt",   "rel_error_avg",  "rel_error_stdev", "missing_bins",
      "cosine_distance", "margin_avg",  "margin_stdev"};
  return kColumns;
}

namespace {

std::string cell2(const std::optional<double>& v) {
  return v ? format_fixed2(*v) : std::string();
}

std::string cell_count(const std::optional<uint64_t>& v) {
  return v ? std::to_string(*v) : std::string();
}

std::vector<std::string> record_row(const QueryRecord& r) {
  return {
      std::to_string(r.id),
      std::to_string(r.interaction),
      r.viz_name,
      r.driver,
      std::to_string(r.data_size),
      format_fixed2(r.think_time_s),
      format_fixed2(r.time_requirement_s),
      r.workflow,
      std::to_string(r.start_ms),
      std::to_string(r.end_ms),
      r.tr_violated ? "TRUE" : "FALSE",
      std::to_string(r.bin_dims),
      r.binning_type,
      r.agg_type,
      cell_count(r.metrics.out_of_margin),
      std::to_string(r.metrics.bins_delivered),
      std::to_string(r.metrics.bins_in_truth),
      cell2(r.metrics.mre_mean),
      cell2(r.metrics.mre_stdev),
      cell2(r.metrics.missing_bins),
      format_fixed2(r.metrics.cosine_distance),
      cell2(r.metrics.margin_mean),
      cell2(r.metrics.margin_stdev),
  };
}

std::optional<double> parse_opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::stod(s);
}

bool parse_bool(const std::string& s) {
  if (s == "TRUE") return true;
  if (s == "FALSE") return false;
  throw IoError("bad boolean cell '" + s + "' in detailed table");
}

}  // namespace

std::string detailed_csv(const std::vector<QueryRecord>& records) {
  std::ostringstream out;
  csv::write_record(out, detailed_columns());
  for (const QueryRecord& r : records) csv::write_record(out, record_row(r));
  return out.str();
}

std::vector<QueryRecord> parse_detailed_csv(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> fields;
  if (!csv::read_record(in, fields))
    throw IoError("detailed table is empty, expected a header row");
  if (fields != detailed_columns())
    throw IoError("detailed table header does not match the expected columns");

  std::vector<QueryRecord> records;
  while (csv::read_record(in, fields)) {
    if (fields.size() != detailed_columns().size())
      throw IoError("detailed table row has " + std::to_string(fields.size()) +
                    " cells, expected " +
                    std::to_string(detailed_columns().size()));
    try {
      QueryRecord r;
      size_t f = 0;
      r.id = std::stoull(fields[f++]);
      r.interaction = std::stoull(fields[f++]);
      r.viz_name = fields[f++];
      r.driver = fields[f++];
      r.data_size = std::stoull(fields[f++]);
      r.think_time_s = std::stod(fields[f++]);
      r.time_requirement_s = std::stod(fields[f++]);
      r.workflow = fields[f++];
      r.start_ms = std::stoll(fields[f++]);
      r.end_ms = std::stoll(fields[f++]);
      r.tr_violated = parse_bool(fields[f++]);
      r.bin_dims = std::stoi(fields[f++]);
      r.binning_type = fields[f++];
      r.agg_type = fields[f++];
      if (!fields[f].empty()) r.metrics.out_of_margin = std::stoull(fields[f]);
      ++f;
      r.metrics.bins_delivered = std::stoull(fields[f++]);
      r.metrics.bins_in_truth = std::stoull(fields[f++]);
      r.metrics.mre_mean = parse_opt(fields[f++]);
      r.metrics.mre_stdev = parse_opt(fields[f++]);
      r.metrics.missing_bins = parse_opt(fields[f++]);
      r.metrics.cosine_distance = std::stod(fields[f++]);
      r.metrics.margin_mean = parse_opt(fields[f++]);
      r.metrics.margin_stdev = parse_opt(fields[f++]);
      r.metrics.tr_violated = r.tr_violated;
      records.push_back(std::move(r));
    } catch (const std::invalid_argument&) {
      throw IoError("unparseable numeric cell in detailed table row " +
                    std::to_string(records.size()));
    }
  }
  return records;
}

std::vector<QueryRecord> load_detailed_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_detailed_csv(buffer.str());
}

// ---------------------------------------------------------------------------
// Summary

namespace {

constexpr size_t kCdfLevels = 200;

/// "independent_3" -> "independent"; unknown prefixes group under the
/// full workflow name so foreign records still aggregate sanely.
std::string workflow_type_of(const std::string& workflow_name) {
  const size_t us = workflow_name.find_last_of('_');
  if (us == std::string::npos || us + 1 == workflow_name.size())
    return workflow_name;
  for (size_t i = us + 1; i < workflow_name.size(); ++i)
    if (!isdigit(static_cast<unsigned char>(workflow_name[i])))
      return workflow_name;
  const std::string prefix = workflow_name.substr(0, us);
  try {
    workflow_type_from_string(prefix);
    return prefix;
  } catch (const Error&) {
    return workflow_name;
  }
}

std::vector<std::pair<double, double>> truncated_cdf(std::vector<double> errors) {
  std::vector<std::pair<double, double>> cdf;
  if (errors.empty()) return cdf;
  std::sort(errors.begin(), errors.end());
  cdf.reserve(kCdfLevels);
  const double n = static_cast<double>(errors.size());
  for (size_t i = 0; i < kCdfLevels; ++i) {
    const double level =
        static_cast<double>(i) / static_cast<double>(kCdfLevels - 1);
    const auto upper = std::upper_bound(errors.begin(), errors.end(), level);
    cdf.emplace_back(level,
                     static_cast<double>(upper - errors.begin()) / n);
  }
  return cdf;
}

double area_above(const std::vector<std::pair<double, double>>& cdf) {
  double integral = 0.0;
  for (size_t i = 1; i < cdf.size(); ++i)
    integral += 0.5 * (cdf[i - 1].second + cdf[i].second) *
                (cdf[i].first - cdf[i - 1].first);
  return 1.0 - integral;
}

}  // namespace

SummaryReport summarize(const std::vector<QueryRecord>& records,
                        const std::vector<PrepInfo>& prep) {
  using Key = std::tuple<std::string, double, std::string>;
  std::map<Key, std::vector<const QueryRecord*>> groups;
  for (const QueryRecord& r : records)
    groups[Key{r.driver, r.time_requirement_s, workflow_type_of(r.workflow)}]
        .push_back(&r);

  SummaryReport report;
  report.prep = prep;
  for (const auto& [key, members] : groups) {
    SummaryCell cell;
    cell.adapter = std::get<0>(key);
    cell.time_requirement_s = std::get<1>(key);
    cell.workflow_type = std::get<2>(key);
    cell.queries = members.size();

    double missing_sum = 0.0;
    size_t missing_n = 0;
    std::vector<double> errors;
    for (const QueryRecord* r : members) {
      if (r->tr_violated) ++cell.violations;
      if (r->metrics.missing_bins) {
        missing_sum += *r->metrics.missing_bins;
        ++missing_n;
      }
      // The error distribution only describes results that arrived in
      // time; late or absent results are captured by the violation rate.
      if (!r->tr_violated && r->metrics.mre_mean)
        errors.push_back(*r->metrics.mre_mean);
    }
    cell.tr_violation_rate =
        static_cast<double>(cell.violations) / static_cast<double>(cell.queries);
    if (missing_n > 0)
      cell.mean_missing_bins = missing_sum / static_cast<double>(missing_n);
    cell.mre_cdf = truncated_cdf(std::move(errors));
    if (!cell.mre_cdf.empty()) cell.area_above_curve = area_above(cell.mre_cdf);

    const uint64_t data_size = members.front()->data_size;
    for (const PrepInfo& p : prep)
      if (p.adapter == cell.adapter && p.data_size == data_size) {
        cell.prep_seconds = p.seconds;
        break;
      }
    report.cells.push_back(std::move(cell));
  }
  return report;
}

json summary_to_json(const SummaryReport& report) {
  json cells = json::array();
  for (const SummaryCell& c : report.cells) {
    json cell;
    cell["adapter"] = c.adapter;
    cell["time_requirement"] = c.time_requirement_s;
    cell["workflow_type"] = c.workflow_type;
    cell["queries"] = c.queries;
    cell["violations"] = c.violations;
    cell["tr_violation_rate"] = c.tr_violation_rate;
    cell["mean_missing_bins"] =
        c.mean_missing_bins ? json(*c.mean_missing_bins) : json(nullptr);
    json cdf = json::array();
    for (const auto& [level, fraction] : c.mre_cdf)
      cdf.push_back(json::array({level, fraction}));
    cell["mre_cdf"] = std::move(cdf);
    cell["area_above_curve"] =
        c.area_above_curve ? json(*c.area_above_curve) : json(nullptr);
    cell["prep_seconds"] =
        c.prep_seconds ? json(*c.prep_seconds) : json(nullptr);
    cells.push_back(std::move(cell));
  }
  json prep = json::array();
  for (const PrepInfo& p : report.prep)
    prep.push_back({{"adapter", p.adapter},
                    {"data_size", p.data_size},
                    {"seconds", p.seconds}});
  return json{{"cells", std::move(cells)}, {"prep_times", std::move(prep)}};
}

// ---------------------------------------------------------------------------
// SVG chart

namespace {

constexpr double kPlotLeft = 70, kPlotTop = 30, kPlotW = 520, kPlotH = 440;
constexpr double kCanvasW = 900, kCanvasH = 540;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                          "#bcbd22", "#17becf"};

double map_x(double level) { return kPlotLeft + level * kPlotW; }
double map_y(double fraction) { return kPlotTop + (1.0 - fraction) * kPlotH; }

void svg_text(std::ostringstream& out, double x, double y,
              const std::string& text, const char* anchor = "middle",
              int size = 12) {
  out << "<text x=\"" << format_double(x) << "\" y=\"" << format_double(y)
      << "\" font-family=\"sans-serif\" font-size=\"" << size
      << "\" text-anchor=\"" << anchor << "\">" << text << "</text>\n";
}

}  // namespace

std::string summary_svg(const SummaryReport& report) {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kCanvasW
      << "\" height=\"" << kCanvasH << "\" viewBox=\"0 0 " << kCanvasW << " "
      << kCanvasH << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Axes with quarter ticks.
  for (int i = 0; i <= 4; ++i) {
    const double v = i / 4.0;
    out << "<line x1=\"" << format_double(map_x(v)) << "\" y1=\""
        << format_double(kPlotTop) << "\" x2=\"" << format_double(map_x(v))
        << "\" y2=\"" << format_double(kPlotTop + kPlotH)
        << "\" stroke=\"#dddddd\"/>\n";
    out << "<line x1=\"" << format_double(kPlotLeft) << "\" y1=\""
        << format_double(map_y(v)) << "\" x2=\""
        << format_double(kPlotLeft + kPlotW) << "\" y2=\""
        << format_double(map_y(v)) << "\" stroke=\"#dddddd\"/>\n";
    svg_text(out, map_x(v), kPlotTop + kPlotH + 18, format_fixed2(v));
    svg_text(out, kPlotLeft - 8, map_y(v) + 4, format_fixed2(v), "end");
  }
  out << "<rect x=\"" << kPlotLeft << "\" y=\"" << kPlotTop << "\" width=\""
      << kPlotW << "\" height=\"" << kPlotH
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg_text(out, kPlotLeft + kPlotW / 2, kCanvasH - 8,
           "mean relative error (truncated at 1.0)");
  svg_text(out, kPlotLeft + kPlotW / 2, 18,
           "cumulative fraction of on-time queries");

  size_t color = 0;
  double legend_y = kPlotTop + 10;
  const double legend_x = kPlotLeft + kPlotW + 30;
  for (const SummaryCell& cell : report.cells) {
    if (cell.mre_cdf.empty()) continue;
    const char* stroke = kPalette[color % (sizeof(kPalette) / sizeof(*kPalette))];
    ++color;
    out << "<polyline fill=\"none\" stroke=\"" << stroke
        << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [level, fraction] : cell.mre_cdf)
      out << format_double(map_x(level)) << "," << format_double(map_y(fraction))
        << " ";
    out << "\"/>\n";
    out << "<line x1=\"" << format_double(legend_x) << "\" y1=\""
        << format_double(legend_y - 4) << "\" x2=\""
        << format_double(legend_x + 24) << "\" y2=\""
        << format_double(legend_y - 4) << "\" stroke=\"" << stroke
        << "\" stroke-width=\"2\"/>\n";
    svg_text(out, legend_x + 30, legend_y,
             cell.adapter + " tr=" + format_double(cell.time_requirement_s) +
                 "s " + cell.workflow_type + " (area " +
                 format_fixed2(*cell.area_above_curve) + ")",
             "start", 11);
    legend_y += 18;
  }
  out << "</svg>\n";
  return out.str();
}

void write_reports(const std::vector<QueryRecord>& records,
                   const std::vector<PrepInfo>& prep,
                   const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());

  auto write = [&](const char* name, const std::string& body) {
    const fs::path path = fs::path(out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << body;
  };
  write("detailed.csv", detailed_csv(records));
  const SummaryReport summary = summarize(records, prep);
  write("summary.json", summary_to_json(summary).dump(2) + "\n");
  write("summary.svg", summary_svg(summary));
}

}  // namespace idebench

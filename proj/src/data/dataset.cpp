#include "idebench/data/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "idebench/common.hpp"
#include "idebench/data/csv.hpp"

namespace idebench {

namespace {

bool parse_number(const std::string& text, double& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end;
}

}  // namespace

Dataset Dataset::from_csv(const std::string& path,
                          const std::string& table_name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open CSV file: " + path);

  std::vector<std::string> header;
  if (!csv::read_record(in, header) || header.empty())
    throw IoError("CSV file has no header row: " + path);

  const size_t n_cols = header.size();
  std::vector<std::vector<std::string>> raw(n_cols);
  std::vector<std::string> fields;
  while (csv::read_record(in, fields)) {
    if (fields.size() != n_cols)
      throw IoError("CSV row with " + std::to_string(fields.size()) +
                    " fields, expected " + std::to_string(n_cols) + ": " +
                    path);
    for (size_t c = 0; c < n_cols; ++c) raw[c].push_back(std::move(fields[c]));
  }

  Dataset ds(table_name);
  for (size_t c = 0; c < n_cols; ++c) {
    bool numeric = false;
    double value = 0.0;
    std::vector<double> numbers;
    numbers.reserve(raw[c].size());
    numeric = true;
    for (const auto& text : raw[c]) {
      if (text.empty()) {
        numbers.push_back(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      if (!parse_number(text, value)) {
        numeric = false;
        break;
      }
      numbers.push_back(value);
    }
    if (numeric && !numbers.empty()) {
      ds.add_quantitative_column(header[c], std::move(numbers));
    } else {
      ds.add_nominal_column(header[c], raw[c]);
    }
    raw[c].clear();
    raw[c].shrink_to_fit();
  }
  return ds;
}

void Dataset::write_csv(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write CSV file: " + path);

  std::vector<std::string> fields;
  for (const auto& col : schema_) fields.push_back(col.name);
  csv::write_record(out, fields);

  for (size_t r = 0; r < row_count_; ++r) {
    fields.clear();
    for (size_t c = 0; c < columns_.size(); ++c)
      fields.push_back(cell_text(c, r));
    csv::write_record(out, fields);
  }
  if (!out) throw IoError("write failed: " + path);
}

void Dataset::finish_column(const std::string& name, Column column) {
  const size_t rows = column.kind == ColumnKind::Quantitative
                          ? column.numbers.size()
                          : column.codes.size();
  if (!first_column_ && rows != row_count_)
    throw ValidationError("column '" + name + "' has " + std::to_string(rows) +
                          " rows, table has " + std::to_string(row_count_));
  if (index_.count(name))
    throw ValidationError("duplicate column name '" + name + "'");

  ColumnSchema schema;
  schema.name = name;
  schema.kind = column.kind;
  if (column.kind == ColumnKind::Quantitative) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double v : column.numbers) {
      if (std::isnan(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (lo > hi) lo = hi = 0.0;  // all-null column
    schema.min = lo;
    schema.max = hi;
  } else {
    schema.categories = column.dict;
  }

  index_[name] = columns_.size();
  schema_.push_back(std::move(schema));
  row_count_ = rows;
  first_column_ = false;
  columns_.push_back(std::move(column));
}

void Dataset::add_quantitative_column(const std::string& name,
                                      std::vector<double> values) {
  Column col;
  col.kind = ColumnKind::Quantitative;
  col.numbers = std::move(values);
  finish_column(name, std::move(col));
}

void Dataset::add_nominal_column(const std::string& name,
                                 const std::vector<std::string>& values) {
  Column col;
  col.kind = ColumnKind::Nominal;
  std::map<std::string, int32_t> codes;
  col.codes.reserve(values.size());
  for (const auto& v : values) {
    auto [it, inserted] = codes.try_emplace(v, col.dict.size());
    if (inserted) col.dict.push_back(v);
    col.codes.push_back(it->second);
  }
  finish_column(name, std::move(col));
}

void Dataset::add_nominal_column_encoded(const std::string& name,
                                         std::vector<int32_t> codes,
                                         std::vector<std::string> dict) {
  Column col;
  col.kind = ColumnKind::Nominal;
  col.codes = std::move(codes);
  col.dict = std::move(dict);
  finish_column(name, std::move(col));
}

size_t Dataset::column_index(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end())
    throw ValidationError("unknown column '" + name + "' in table '" + name_ +
                          "'");
  return it->second;
}

bool Dataset::has_column(const std::string& name) const {
  return index_.count(name) > 0;
}

std::string Dataset::cell_text(size_t col, size_t row) const {
  const Column& c = columns_[col];
  if (c.kind == ColumnKind::Nominal) return c.dict[c.codes[row]];
  double v = c.numbers[row];
  if (std::isnan(v)) return "";
  return format_double(v);
}

std::vector<std::pair<std::string, uint64_t>> Dataset::category_counts(
    size_t col) const {
  const Column& c = columns_[col];
  if (c.kind != ColumnKind::Nominal)
    throw ValidationError("category_counts on quantitative column '" +
                          schema_[col].name + "'");
  std::vector<uint64_t> counts(c.dict.size(), 0);
  for (int32_t code : c.codes) counts[code]++;
  std::vector<std::pair<std::string, uint64_t>> out;
  out.reserve(c.dict.size());
  for (size_t i = 0; i < c.dict.size(); ++i)
    out.emplace_back(c.dict[i], counts[i]);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

}  // namespace idebench

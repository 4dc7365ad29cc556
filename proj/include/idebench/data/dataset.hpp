#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "idebench/core/types.hpp"

namespace idebench {

/// In-memory column-major table. Nominal columns are dictionary
/// encoded; quantitative columns hold doubles with NaN marking nulls.
/// Immutable once built; safe to share read-only across threads.
class Dataset {
 public:
  struct Column {
    ColumnKind kind = ColumnKind::Quantitative;
    std::vector<double> numbers;       // quantitative
    std::vector<int32_t> codes;        // nominal, index into dict
    std::vector<std::string> dict;     // nominal, first-appearance order
  };

  Dataset() = default;
  explicit Dataset(std::string table_name) : name_(std::move(table_name)) {}

  /// Loads a CSV with header row. A column is quantitative iff every
  /// non-empty field parses as a number; empty numeric fields load as
  /// NaN. Quantitative min/max are fixed here, once, for the dataset's
  /// lifetime.
  static Dataset from_csv(const std::string& path,
                          const std::string& table_name);

  void write_csv(const std::string& path) const;

  // -- construction
  void add_quantitative_column(const std::string& name,
                               std::vector<double> values);
  void add_nominal_column(const std::string& name,
                          const std::vector<std::string>& values);
  void add_nominal_column_encoded(const std::string& name,
                                  std::vector<int32_t> codes,
                                  std::vector<std::string> dict);

  // -- access
  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }
  size_t row_count() const { return row_count_; }
  size_t column_count() const { return columns_.size(); }
  const std::vector<ColumnSchema>& schema() const { return schema_; }
  const ColumnSchema& schema_of(size_t col) const { return schema_[col]; }
  const Column& column(size_t col) const { return columns_[col]; }
  const std::string& column_name(size_t col) const {
    return schema_[col].name;
  }
  /// Index of the named column; throws ValidationError if absent.
  size_t column_index(const std::string& name) const;
  bool has_column(const std::string& name) const;

  double number_at(size_t col, size_t row) const {
    return columns_[col].numbers[row];
  }
  int32_t code_at(size_t col, size_t row) const {
    return columns_[col].codes[row];
  }
  const std::string& category_at(size_t col, size_t row) const {
    const Column& c = columns_[col];
    return c.dict[c.codes[row]];
  }
  /// String form of any cell (used by CSV output and normalization).
  std::string cell_text(size_t col, size_t row) const;

  /// Category frequencies of a nominal column, descending count then
  /// category name.
  std::vector<std::pair<std::string, uint64_t>> category_counts(
      size_t col) const;

 private:
  void finish_column(const std::string& name, Column column);

  std::string name_;
  std::vector<ColumnSchema> schema_;
  std::vector<Column> columns_;
  std::map<std::string, size_t> index_;
  size_t row_count_ = 0;
  bool first_column_ = true;
};

}  // namespace idebench

#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "idebench/data/dataset.hpp"

namespace idebench {

/// How to split a flat table into one fact table plus dimension tables.
struct StarSchemaSpec {
  struct Dimension {
    std::string table;
    std::string key;  // surrogate key column, appears in fact and dimension
    std::vector<std::string> columns;
  };

  std::string fact_table;
  std::vector<Dimension> dimensions;

  /// Validates against a flat schema: listed columns exist, no column is
  /// claimed by two dimensions, key names collide with nothing.
  void check(const std::vector<ColumnSchema>& schema) const;
};

nlohmann::json star_spec_to_json(const StarSchemaSpec& spec);
StarSchemaSpec star_spec_from_json(const nlohmann::json& j);
StarSchemaSpec load_star_spec_file(const std::string& path);

struct StarTables {
  Dataset fact;
  std::vector<Dataset> dimensions;
};

/// Vertical partition: each dimension table gets the distinct attribute
/// combinations (first-appearance order) plus a dense surrogate key; the
/// fact table keeps the rest plus one foreign key per dimension. Joining
/// everything back reproduces the input rows exactly.
StarTables normalize(const Dataset& rows, const StarSchemaSpec& spec);

/// Inverse of normalize: hash-joins every foreign key back in. Output
/// columns are the fact table's non-key columns followed by each
/// dimension's columns. Used by adapters pointed at a star directory.
Dataset join_star(const StarTables& tables, const StarSchemaSpec& spec);

/// Writes fact + dimensions + star.json into a directory (created if
/// missing); load_star_dir reads the same layout back.
void save_star_dir(const StarTables& tables, const StarSchemaSpec& spec,
                   const std::string& dir);
StarTables load_star_dir(const std::string& dir, StarSchemaSpec* spec_out);

}  // namespace idebench

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "idebench/core/graph.hpp"
#include "idebench/core/types.hpp"

namespace idebench {

class Dataset;

/// Schema plus the per-column statistics the workload generator samples
/// filter values from.
struct SchemaInfo {
  std::string table;
  uint64_t row_count = 0;
  std::vector<ColumnSchema> columns;
  /// Nominal column -> (category, count), descending count.
  std::map<std::string, std::vector<std::pair<std::string, uint64_t>>>
      frequencies;

  const ColumnSchema& column(const std::string& name) const;
  bool has_column(const std::string& name) const;
};

SchemaInfo schema_from_dataset(const Dataset& dataset);
nlohmann::json schema_to_json(const SchemaInfo& schema);
SchemaInfo schema_from_json(const nlohmann::json& j);
SchemaInfo load_schema_file(const std::string& path);
void save_schema_file(const SchemaInfo& schema, const std::string& path);

// -- filter predicates ------------------------------------------------------
nlohmann::json predicate_to_json(const FilterPredicate& predicate);
FilterPredicate predicate_from_json(const nlohmann::json& j);

// -- visualization specs ----------------------------------------------------
nlohmann::json viz_to_json(const VizSpec& viz);
VizSpec viz_from_json(const nlohmann::json& j);

// -- workflows ---------------------------------------------------------------
nlohmann::json workflow_to_json(const Workflow& workflow);
Workflow workflow_from_json(const nlohmann::json& j);
Workflow load_workflow_file(const std::string& path);
void save_workflow_file(const Workflow& workflow, const std::string& path);
/// All *.json workflows in a directory, ordered by filename.
std::vector<Workflow> load_workflow_dir(const std::string& dir);

// -- result tables (subprocess bridge wire format) ---------------------------
nlohmann::json result_table_to_json(const ResultTable& table);
ResultTable result_table_from_json(const nlohmann::json& j);

const char* to_string(AggregateFn fn);
AggregateFn aggregate_fn_from_string(const std::string& s);
const char* to_string(CompareOp op);
CompareOp compare_op_from_string(const std::string& s);

}  // namespace idebench

#include "idebench/datagen/normalize.hpp"

#include <algorithm>
#include <bit>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <unordered_map>

namespace idebench {

namespace fs = std::filesystem;
using nlohmann::json;

void StarSchemaSpec::check(const std::vector<ColumnSchema>& schema) const {
  if (fact_table.empty()) throw ValidationError("fact table needs a name");
  std::set<std::string> flat_names;
  for (const auto& c : schema) flat_names.insert(c.name);

  std::set<std::string> claimed, tables{fact_table}, keys;
  for (const auto& dim : dimensions) {
    if (dim.table.empty() || dim.key.empty())
      throw ValidationError("dimension needs a table name and a key name");
    if (!tables.insert(dim.table).second)
      throw ValidationError("duplicate table name '" + dim.table + "'");
    if (dim.columns.empty())
      throw ValidationError("dimension '" + dim.table + "' lists no columns");
    if (flat_names.count(dim.key) || !keys.insert(dim.key).second)
      throw ValidationError("key '" + dim.key +
                            "' collides with an existing column");
    for (const auto& col : dim.columns) {
      if (!flat_names.count(col))
        throw ValidationError("dimension '" + dim.table +
                              "' references unknown column '" + col + "'");
      if (!claimed.insert(col).second)
        throw ValidationError("column '" + col +
                              "' is claimed by two dimensions");
    }
  }
}

json star_spec_to_json(const StarSchemaSpec& spec) {
  json dims = json::array();
  for (const auto& d : spec.dimensions)
    dims.push_back(
        {{"table", d.table}, {"key", d.key}, {"columns", d.columns}});
  return json{{"fact", spec.fact_table}, {"dimensions", dims}};
}

StarSchemaSpec star_spec_from_json(const json& j) {
  StarSchemaSpec spec;
  spec.fact_table = j.at("fact").get<std::string>();
  for (const auto& d : j.at("dimensions")) {
    StarSchemaSpec::Dimension dim;
    dim.table = d.at("table").get<std::string>();
    dim.key = d.at("key").get<std::string>();
    dim.columns = d.at("columns").get<std::vector<std::string>>();
    spec.dimensions.push_back(std::move(dim));
  }
  return spec;
}

StarSchemaSpec load_star_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path);
  try {
    return star_spec_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw IoError("invalid star spec in " + path + ": " + e.what());
  }
}

namespace {

// Exact per-row fingerprint of one dimension's attribute columns.
// Nominal cells contribute their dictionary code, quantitative cells
// their bit pattern, so distinctness matches value equality.
std::vector<int64_t> combo_key(const Dataset& rows,
                               const std::vector<size_t>& cols, size_t row) {
  std::vector<int64_t> key;
  key.reserve(cols.size());
  for (size_t c : cols) {
    if (rows.schema_of(c).kind == ColumnKind::Nominal)
      key.push_back(rows.code_at(c, row));
    else
      key.push_back(std::bit_cast<int64_t>(rows.number_at(c, row)));
  }
  return key;
}

}  // namespace

StarTables normalize(const Dataset& rows, const StarSchemaSpec& spec) {
  spec.check(rows.schema());

  StarTables out;
  std::set<std::string> moved;
  for (const auto& dim : spec.dimensions)
    moved.insert(dim.columns.begin(), dim.columns.end());

  std::vector<std::vector<double>> fk_columns;  // one per dimension
  for (const auto& dim : spec.dimensions) {
    std::vector<size_t> cols;
    for (const auto& name : dim.columns)
      cols.push_back(rows.column_index(name));

    std::map<std::vector<int64_t>, int64_t> seen;
    std::vector<size_t> first_row;  // surrogate key -> exemplar row
    std::vector<double> fk(rows.row_count());
    for (size_t r = 0; r < rows.row_count(); ++r) {
      auto key = combo_key(rows, cols, r);
      auto [it, inserted] =
          seen.emplace(std::move(key), static_cast<int64_t>(first_row.size()));
      if (inserted) first_row.push_back(r);
      fk[r] = static_cast<double>(it->second);
    }
    fk_columns.push_back(std::move(fk));

    Dataset table(dim.table);
    std::vector<double> key_values(first_row.size());
    for (size_t k = 0; k < first_row.size(); ++k)
      key_values[k] = static_cast<double>(k);
    table.add_quantitative_column(dim.key, std::move(key_values));
    for (size_t c : cols) {
      if (rows.schema_of(c).kind == ColumnKind::Nominal) {
        std::vector<int32_t> codes(first_row.size());
        for (size_t k = 0; k < first_row.size(); ++k)
          codes[k] = rows.code_at(c, first_row[k]);
        table.add_nominal_column_encoded(rows.column_name(c), std::move(codes),
                                         rows.column(c).dict);
      } else {
        std::vector<double> values(first_row.size());
        for (size_t k = 0; k < first_row.size(); ++k)
          values[k] = rows.number_at(c, first_row[k]);
        table.add_quantitative_column(rows.column_name(c), std::move(values));
      }
    }
    out.dimensions.push_back(std::move(table));
  }

  Dataset fact(spec.fact_table);
  for (size_t c = 0; c < rows.column_count(); ++c) {
    if (moved.count(rows.column_name(c))) continue;
    if (rows.schema_of(c).kind == ColumnKind::Nominal)
      fact.add_nominal_column_encoded(rows.column_name(c),
                                      std::vector<int32_t>(rows.column(c).codes),
                                      rows.column(c).dict);
    else
      fact.add_quantitative_column(
          rows.column_name(c), std::vector<double>(rows.column(c).numbers));
  }
  for (size_t d = 0; d < spec.dimensions.size(); ++d)
    fact.add_quantitative_column(spec.dimensions[d].key,
                                 std::move(fk_columns[d]));
  out.fact = std::move(fact);
  return out;
}

Dataset join_star(const StarTables& tables, const StarSchemaSpec& spec) {
  const Dataset& fact = tables.fact;
  const size_t n = fact.row_count();
  Dataset out(spec.fact_table);

  std::set<std::string> key_names;
  for (const auto& dim : spec.dimensions) key_names.insert(dim.key);

  for (size_t c = 0; c < fact.column_count(); ++c) {
    if (key_names.count(fact.column_name(c))) continue;
    if (fact.schema_of(c).kind == ColumnKind::Nominal)
      out.add_nominal_column_encoded(fact.column_name(c),
                                     std::vector<int32_t>(fact.column(c).codes),
                                     fact.column(c).dict);
    else
      out.add_quantitative_column(
          fact.column_name(c), std::vector<double>(fact.column(c).numbers));
  }

  for (size_t d = 0; d < spec.dimensions.size(); ++d) {
    const auto& dim_spec = spec.dimensions[d];
    const Dataset& dim = tables.dimensions[d];
    // key value -> dimension row
    std::unordered_map<int64_t, size_t> by_key;
    by_key.reserve(dim.row_count());
    const size_t key_col = dim.column_index(dim_spec.key);
    for (size_t r = 0; r < dim.row_count(); ++r)
      by_key[static_cast<int64_t>(dim.number_at(key_col, r))] = r;

    const size_t fk_col = fact.column_index(dim_spec.key);
    std::vector<size_t> dim_row(n);
    for (size_t r = 0; r < n; ++r) {
      auto it = by_key.find(static_cast<int64_t>(fact.number_at(fk_col, r)));
      if (it == by_key.end())
        throw ValidationError("fact row " + std::to_string(r) +
                              " has no match in dimension '" + dim_spec.table +
                              "'");
      dim_row[r] = it->second;
    }

    for (const auto& name : dim_spec.columns) {
      const size_t c = dim.column_index(name);
      if (dim.schema_of(c).kind == ColumnKind::Nominal) {
        std::vector<int32_t> codes(n);
        for (size_t r = 0; r < n; ++r) codes[r] = dim.code_at(c, dim_row[r]);
        out.add_nominal_column_encoded(name, std::move(codes),
                                       dim.column(c).dict);
      } else {
        std::vector<double> values(n);
        for (size_t r = 0; r < n; ++r)
          values[r] = dim.number_at(c, dim_row[r]);
        out.add_quantitative_column(name, std::move(values));
      }
    }
  }
  return out;
}

void save_star_dir(const StarTables& tables, const StarSchemaSpec& spec,
                   const std::string& dir) {
  fs::create_directories(dir);
  std::ofstream meta(fs::path(dir) / "star.json");
  if (!meta) throw IoError("cannot write " + dir + "/star.json");
  meta << star_spec_to_json(spec).dump(2) << '\n';
  tables.fact.write_csv((fs::path(dir) / (spec.fact_table + ".csv")).string());
  for (size_t d = 0; d < tables.dimensions.size(); ++d)
    tables.dimensions[d].write_csv(
        (fs::path(dir) / (spec.dimensions[d].table + ".csv")).string());
}

StarTables load_star_dir(const std::string& dir, StarSchemaSpec* spec_out) {
  const fs::path meta = fs::path(dir) / "star.json";
  if (!fs::exists(meta))
    throw IoError("no star.json in " + dir +
                  "; expected a directory produced by datagen --schema");
  StarSchemaSpec spec = load_star_spec_file(meta.string());
  StarTables tables;
  tables.fact = Dataset::from_csv(
      (fs::path(dir) / (spec.fact_table + ".csv")).string(), spec.fact_table);
  for (const auto& dim : spec.dimensions)
    tables.dimensions.push_back(Dataset::from_csv(
        (fs::path(dir) / (dim.table + ".csv")).string(), dim.table));
  if (spec_out) *spec_out = std::move(spec);
  return tables;
}

}  // namespace idebench

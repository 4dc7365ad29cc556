#include "idebench/core/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "idebench/data/dataset.hpp"

namespace idebench {

using nlohmann::json;

namespace {

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IoError("invalid JSON in " + path + ": " + e.what());
  }
}

void save_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file: " + path);
  out << j.dump(2) << '\n';
}

}  // namespace

const char* to_string(AggregateFn fn) {
  switch (fn) {
    case AggregateFn::Count: return "count";
    case AggregateFn::Sum: return "sum";
    case AggregateFn::Avg: return "avg";
    case AggregateFn::Min: return "min";
    case AggregateFn::Max: return "max";
  }
  return "count";
}

AggregateFn aggregate_fn_from_string(const std::string& s) {
  if (s == "count") return AggregateFn::Count;
  if (s == "sum") return AggregateFn::Sum;
  if (s == "avg") return AggregateFn::Avg;
  if (s == "min") return AggregateFn::Min;
  if (s == "max") return AggregateFn::Max;
  throw ValidationError("unknown aggregate function '" + s + "'");
}

const char* to_string(CompareOp op) {
  switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Neq: return "!=";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
    case CompareOp::InRange: return "range";
  }
  return "=";
}

CompareOp compare_op_from_string(const std::string& s) {
  if (s == "=") return CompareOp::Eq;
  if (s == "!=") return CompareOp::Neq;
  if (s == "<") return CompareOp::Lt;
  if (s == "<=") return CompareOp::Le;
  if (s == ">") return CompareOp::Gt;
  if (s == ">=") return CompareOp::Ge;
  if (s == "range") return CompareOp::InRange;
  throw ValidationError("unknown filter operator '" + s + "'");
}

// -- schema -------------------------------------------------------------------

const ColumnSchema& SchemaInfo::column(const std::string& name) const {
  auto it = std::find_if(columns.begin(), columns.end(),
                         [&](const ColumnSchema& c) { return c.name == name; });
  if (it == columns.end())
    throw ValidationError("unknown column '" + name + "' in schema of '" +
                          table + "'");
  return *it;
}

bool SchemaInfo::has_column(const std::string& name) const {
  return std::any_of(columns.begin(), columns.end(),
                     [&](const ColumnSchema& c) { return c.name == name; });
}

SchemaInfo schema_from_dataset(const Dataset& dataset) {
  SchemaInfo info;
  info.table = dataset.name();
  info.row_count = dataset.row_count();
  info.columns = dataset.schema();
  for (size_t c = 0; c < dataset.column_count(); ++c) {
    if (dataset.schema_of(c).kind == ColumnKind::Nominal)
      info.frequencies[dataset.column_name(c)] = dataset.category_counts(c);
  }
  return info;
}

json schema_to_json(const SchemaInfo& schema) {
  json cols = json::array();
  for (const auto& c : schema.columns) {
    json col;
    col["name"] = c.name;
    if (c.kind == ColumnKind::Quantitative) {
      col["kind"] = "quantitative";
      col["min"] = c.min;
      col["max"] = c.max;
    } else {
      col["kind"] = "nominal";
      json cats = json::array();
      auto it = schema.frequencies.find(c.name);
      if (it != schema.frequencies.end()) {
        for (const auto& [value, count] : it->second)
          cats.push_back({{"value", value}, {"count", count}});
      } else {
        for (const auto& value : c.categories)
          cats.push_back({{"value", value}, {"count", 0}});
      }
      col["categories"] = cats;
    }
    cols.push_back(col);
  }
  return json{{"table", schema.table},
              {"row_count", schema.row_count},
              {"columns", cols}};
}

SchemaInfo schema_from_json(const json& j) {
  SchemaInfo info;
  info.table = j.at("table").get<std::string>();
  info.row_count = j.value("row_count", uint64_t{0});
  for (const auto& col : j.at("columns")) {
    ColumnSchema c;
    c.name = col.at("name").get<std::string>();
    const std::string kind = col.at("kind").get<std::string>();
    if (kind == "quantitative") {
      c.kind = ColumnKind::Quantitative;
      c.min = col.at("min").get<double>();
      c.max = col.at("max").get<double>();
    } else if (kind == "nominal") {
      c.kind = ColumnKind::Nominal;
      std::vector<std::pair<std::string, uint64_t>> freq;
      for (const auto& cat : col.at("categories")) {
        std::string value = cat.at("value").get<std::string>();
        c.categories.push_back(value);
        freq.emplace_back(std::move(value), cat.value("count", uint64_t{0}));
      }
      info.frequencies[c.name] = std::move(freq);
    } else {
      throw ValidationError("unknown column kind '" + kind + "'");
    }
    c.check();
    info.columns.push_back(std::move(c));
  }
  return info;
}

SchemaInfo load_schema_file(const std::string& path) {
  return schema_from_json(load_json_file(path));
}

void save_schema_file(const SchemaInfo& schema, const std::string& path) {
  save_json_file(schema_to_json(schema), path);
}

// -- predicates ---------------------------------------------------------------

json predicate_to_json(const FilterPredicate& predicate) {
  json atoms = json::array();
  for (const auto& a : predicate.atoms) {
    json atom;
    atom["column"] = a.column;
    atom["op"] = to_string(a.op);
    switch (a.op) {
      case CompareOp::Eq:
      case CompareOp::Neq:
        atom["value"] = a.category;
        break;
      case CompareOp::InRange:
        atom["low"] = a.low;
        atom["high"] = a.high;
        break;
      default:
        atom["value"] = a.number;
    }
    atoms.push_back(atom);
  }
  return atoms;
}

FilterPredicate predicate_from_json(const json& j) {
  FilterPredicate predicate;
  for (const auto& atom : j) {
    FilterAtom a;
    a.column = atom.at("column").get<std::string>();
    a.op = compare_op_from_string(atom.at("op").get<std::string>());
    switch (a.op) {
      case CompareOp::Eq:
      case CompareOp::Neq:
        a.category = atom.at("value").get<std::string>();
        break;
      case CompareOp::InRange:
        a.low = atom.at("low").get<double>();
        a.high = atom.at("high").get<double>();
        if (!(a.low <= a.high))
          throw ValidationError("range atom on '" + a.column +
                                "' with low > high");
        break;
      default:
        a.number = atom.at("value").get<double>();
    }
    predicate.atoms.push_back(std::move(a));
  }
  return predicate;
}

// -- viz specs ----------------------------------------------------------------

json viz_to_json(const VizSpec& viz) {
  json binning = json::array();
  for (const auto& b : viz.binning) {
    json dim;
    dim["column"] = b.column;
    switch (b.method) {
      case BinningSpec::Method::Distinct:
        dim["method"] = "distinct";
        break;
      case BinningSpec::Method::FixedCount:
        dim["method"] = "fixed-count";
        dim["k"] = b.bin_count;
        break;
      case BinningSpec::Method::FixedWidth:
        dim["method"] = "fixed-width";
        dim["w"] = b.bin_width;
        dim["reference"] = b.reference;
        break;
    }
    binning.push_back(dim);
  }

  json agg;
  agg["fn"] = to_string(viz.aggregate.fn);
  if (viz.aggregate.fn != AggregateFn::Count)
    agg["column"] = viz.aggregate.column;

  json out{{"name", viz.name}, {"binning", binning}, {"agg", agg}};
  if (viz.own_filter && !viz.own_filter->empty())
    out["filter"] = predicate_to_json(*viz.own_filter);
  return out;
}

VizSpec viz_from_json(const json& j) {
  VizSpec viz;
  viz.name = j.at("name").get<std::string>();
  for (const auto& dim : j.at("binning")) {
    BinningSpec b;
    b.column = dim.at("column").get<std::string>();
    const std::string method = dim.value("method", "distinct");
    if (method == "distinct") {
      b.method = BinningSpec::Method::Distinct;
    } else if (method == "fixed-count") {
      b.method = BinningSpec::Method::FixedCount;
      b.bin_count = dim.at("k").get<int64_t>();
    } else if (method == "fixed-width") {
      b.method = BinningSpec::Method::FixedWidth;
      b.bin_width = dim.at("w").get<double>();
      b.reference = dim.value("reference", 0.0);
    } else {
      throw ValidationError("unknown binning method '" + method + "'");
    }
    b.check();
    viz.binning.push_back(std::move(b));
  }
  if (viz.binning.empty() || viz.binning.size() > 2)
    throw ValidationError("viz '" + viz.name +
                          "' must have 1 or 2 binning dimensions");

  const json& agg = j.at("agg");
  viz.aggregate.fn = aggregate_fn_from_string(agg.at("fn").get<std::string>());
  if (viz.aggregate.fn != AggregateFn::Count)
    viz.aggregate.column = agg.at("column").get<std::string>();

  if (j.contains("filter")) viz.own_filter = predicate_from_json(j["filter"]);
  return viz;
}

// -- workflows ----------------------------------------------------------------

json workflow_to_json(const Workflow& workflow) {
  json interactions = json::array();
  for (const auto& interaction : workflow.interactions) {
    json item;
    item["kind"] = interaction_kind(interaction);
    if (const auto* create = std::get_if<CreateViz>(&interaction)) {
      item["viz"] = viz_to_json(create->spec);
    } else if (const auto* filter = std::get_if<SetFilter>(&interaction)) {
      item["viz"] = filter->viz;
      item["predicate"] = predicate_to_json(filter->predicate);
    } else if (const auto* select = std::get_if<Select>(&interaction)) {
      item["viz"] = select->viz;
      item["predicate"] = predicate_to_json(select->predicate);
    } else if (const auto* link = std::get_if<Link>(&interaction)) {
      item["source"] = link->source;
      item["target"] = link->target;
    } else if (const auto* discard = std::get_if<Discard>(&interaction)) {
      item["viz"] = discard->viz;
    }
    interactions.push_back(item);
  }
  return json{{"name", workflow.name},
              {"type", to_string(workflow.type)},
              {"interactions", interactions}};
}

Workflow workflow_from_json(const json& j) {
  Workflow workflow;
  workflow.name = j.at("name").get<std::string>();
  workflow.type = workflow_type_from_string(j.at("type").get<std::string>());
  for (const auto& item : j.at("interactions")) {
    const std::string kind = item.at("kind").get<std::string>();
    if (kind == "create") {
      workflow.interactions.push_back(CreateViz{viz_from_json(item.at("viz"))});
    } else if (kind == "filter") {
      workflow.interactions.push_back(
          SetFilter{item.at("viz").get<std::string>(),
                    predicate_from_json(item.at("predicate"))});
    } else if (kind == "select") {
      workflow.interactions.push_back(
          Select{item.at("viz").get<std::string>(),
                 predicate_from_json(item.at("predicate"))});
    } else if (kind == "link") {
      workflow.interactions.push_back(
          Link{item.at("source").get<std::string>(),
               item.at("target").get<std::string>()});
    } else if (kind == "discard") {
      workflow.interactions.push_back(
          Discard{item.at("viz").get<std::string>()});
    } else {
      throw ValidationError("unknown interaction kind '" + kind + "'");
    }
  }
  return workflow;
}

Workflow load_workflow_file(const std::string& path) {
  return workflow_from_json(load_json_file(path));
}

void save_workflow_file(const Workflow& workflow, const std::string& path) {
  save_json_file(workflow_to_json(workflow), path);
}

std::vector<Workflow> load_workflow_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
  std::vector<std::string> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      paths.push_back(entry.path().string());
  }
  std::sort(paths.begin(), paths.end());
  std::vector<Workflow> workflows;
  workflows.reserve(paths.size());
  for (const auto& path : paths) workflows.push_back(load_workflow_file(path));
  return workflows;
}

// -- result tables ------------------------------------------------------------

json result_table_to_json(const ResultTable& table) {
  json bins = json::array();
  for (const auto& [key, value] : table.bins) {
    json parts = json::array();
    for (const auto& part : key.parts) {
      if (std::holds_alternative<int64_t>(part))
        parts.push_back(std::get<int64_t>(part));
      else
        parts.push_back(std::get<std::string>(part));
    }
    json bin{{"key", parts}, {"estimate", value.estimate}};
    if (value.margin) {
      if (std::isfinite(*value.margin))
        bin["margin"] = *value.margin;
      else
        bin["margin"] = nullptr;  // unbounded
    }
    bins.push_back(bin);
  }
  return json{{"bins", bins}, {"progress", table.progress}};
}

ResultTable result_table_from_json(const json& j) {
  ResultTable table;
  table.progress = j.value("progress", 1.0);
  for (const auto& bin : j.at("bins")) {
    BinKey key;
    for (const auto& part : bin.at("key")) {
      if (part.is_string())
        key.parts.emplace_back(part.get<std::string>());
      else if (part.is_number_integer() || part.is_number_unsigned())
        key.parts.emplace_back(part.get<int64_t>());
      else if (part.is_number_float())
        key.parts.emplace_back(static_cast<int64_t>(part.get<double>()));
      else
        throw ValidationError("bin key component must be number or string");
    }
    BinValue value;
    value.estimate = bin.at("estimate").get<double>();
    if (bin.contains("margin")) {
      if (bin["margin"].is_null())
        value.margin = std::numeric_limits<double>::infinity();
      else
        value.margin = bin["margin"].get<double>();
    }
    table.bins[std::move(key)] = value;
  }
  return table;
}

}  // namespace idebench

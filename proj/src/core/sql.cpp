#include "idebench/core/sql.hpp"

#include <algorithm>
#include <sstream>

namespace idebench {

namespace {

std::string quote_literal(const std::string& value) {
  std::string out = "'";
  for (char c : value) {
    out += c;
    if (c == '\'') out += '\'';
  }
  out += "'";
  return out;
}

const ColumnSchema& find_column(const std::vector<ColumnSchema>& schema,
                                const std::string& name) {
  auto it = std::find_if(schema.begin(), schema.end(),
                         [&](const ColumnSchema& c) { return c.name == name; });
  if (it == schema.end())
    throw ValidationError("unknown column '" + name + "' in query spec");
  return *it;
}

// Renders "lhs-literal". A negative literal must not butt up against
// the minus sign: sqlite and friends read "--" as a line comment.
std::string render_minus(const std::string& lhs, double literal) {
  const std::string lit = format_double(literal);
  if (!lit.empty() && lit.front() == '-') return lhs + " - " + lit;
  return lhs + "-" + lit;
}

std::string render_aggregate(const AggregateSpec& agg) {
  switch (agg.fn) {
    case AggregateFn::Count: return "COUNT(*)";
    case AggregateFn::Sum: return "SUM(" + agg.column + ")";
    case AggregateFn::Avg: return "AVG(" + agg.column + ")";
    case AggregateFn::Min: return "MIN(" + agg.column + ")";
    case AggregateFn::Max: return "MAX(" + agg.column + ")";
  }
  throw ValidationError("unreachable aggregate");
}

}  // namespace

std::string render_atom(const FilterAtom& atom) {
  switch (atom.op) {
    case CompareOp::Eq:
      return atom.column + " = " + quote_literal(atom.category);
    case CompareOp::Neq:
      return atom.column + " != " + quote_literal(atom.category);
    case CompareOp::Lt:
      return atom.column + " < " + format_double(atom.number);
    case CompareOp::Le:
      return atom.column + " <= " + format_double(atom.number);
    case CompareOp::Gt:
      return atom.column + " > " + format_double(atom.number);
    case CompareOp::Ge:
      return atom.column + " >= " + format_double(atom.number);
    case CompareOp::InRange:
      return "(" + atom.column + " >= " + format_double(atom.low) + " AND " +
             atom.column + " < " + format_double(atom.high) + ")";
  }
  throw ValidationError("unreachable compare op");
}

std::string render_group_expr(const BinningSpec& binning,
                              const ColumnSchema& column) {
  binning.check();
  switch (binning.method) {
    case BinningSpec::Method::Distinct:
      return binning.column;
    case BinningSpec::Method::FixedWidth: {
      std::string value = binning.column;
      if (binning.reference != 0.0)
        value = "(" + render_minus(value, binning.reference) + ")";
      return "FLOOR(" + value + "/" + format_double(binning.bin_width) + ")";
    }
    case BinningSpec::Method::FixedCount: {
      const double span = column.max - column.min;
      if (span <= 0.0) return "0";
      std::string shifted = binning.column;
      if (column.min != 0.0)
        shifted = "(" + render_minus(shifted, column.min) + ")";
      return "LEAST(FLOOR(" + std::to_string(binning.bin_count) + "*" +
             shifted + "/" + format_double(span) + ")," +
             std::to_string(binning.bin_count - 1) + ")";
    }
  }
  throw ValidationError("unreachable binning method");
}

std::string render_sql(const VizSpec& viz, const FilterPredicate& effective,
                       const std::string& table,
                       const std::vector<ColumnSchema>& schema) {
  if (viz.binning.empty() || viz.binning.size() > 2)
    throw ValidationError("viz '" + viz.name +
                          "' must have 1 or 2 binning dimensions");

  std::vector<std::string> groups;
  for (const auto& b : viz.binning)
    groups.push_back(render_group_expr(b, find_column(schema, b.column)));

  std::ostringstream sql;
  sql << "SELECT ";
  for (const auto& g : groups) sql << g << ", ";
  sql << render_aggregate(viz.aggregate) << " FROM " << table;

  if (!effective.empty()) {
    sql << " WHERE ";
    for (size_t i = 0; i < effective.atoms.size(); ++i) {
      if (i) sql << " AND ";
      sql << render_atom(effective.atoms[i]);
    }
  }

  sql << " GROUP BY ";
  for (size_t i = 0; i < groups.size(); ++i) {
    if (i) sql << ", ";
    sql << groups[i];
  }
  return sql.str();
}

}  // namespace idebench

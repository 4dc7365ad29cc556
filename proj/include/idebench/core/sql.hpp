#pragma once

#include "idebench/core/types.hpp"

namespace idebench {

/// SQL text for one filter atom, e.g. `carrier = 'AA'` or
/// `(dep_delay >= 0 AND dep_delay < 60)`.
std::string render_atom(const FilterAtom& atom);

/// SQL grouping expression for one binning dimension. Nominal columns
/// group on the raw column; quantitative ones on an arithmetic floor
/// expression implementing bin_of.
std::string render_group_expr(const BinningSpec& binning,
                              const ColumnSchema& column);

/// Single deterministic SELECT implementing the visualization's
/// grouping, aggregate, and effective WHERE clause, e.g.
/// `SELECT carrier, COUNT(*) FROM flights GROUP BY carrier`.
std::string render_sql(const VizSpec& viz, const FilterPredicate& effective,
                       const std::string& table,
                       const std::vector<ColumnSchema>& schema);

}  // namespace idebench

#pragma once

// Independent reference implementations the tests compare the real
// engines and metric code against. Written as plain row-at-a-time
// loops over std::map, sharing no code with the library paths they
// check.

#include <optional>
#include <string>
#include <vector>

#include "idebench/adapters/adapter.hpp"
#include "idebench/core/json_io.hpp"
#include "idebench/data/dataset.hpp"
#include "idebench/rng.hpp"

namespace idebench::testing {

/// Exact aggregate via a naive row loop with SQL GROUP BY semantics:
/// empty bins absent, null aggregate inputs skipped, null group cells
/// drop the row.
ResultTable reference_query(const Dataset& data, const VizSpec& viz,
                            const FilterPredicate& filter);

/// Every quality metric, one straightforward loop each.
struct NaiveMetrics {
  std::optional<double> missing_bins;
  std::optional<double> mre_mean, mre_stdev;
  size_t mre_excluded = 0;
  std::optional<double> smape;
  double cosine_distance = 0.0;
  std::optional<double> margin_mean, margin_stdev;
  size_t margin_excluded = 0;
  std::optional<uint64_t> out_of_margin;
  std::optional<double> bias;
};
NaiveMetrics naive_metrics(const ResultTable& delivered,
                           const ResultTable& truth);

/// Random result table over a shared key universe so tables overlap:
/// keys "k0".."k{universe-1}", values in [-10, 10] with zeros sprinkled
/// in, optional margins (occasionally unbounded).
ResultTable random_result_table(Rng& rng, size_t max_bins, size_t universe,
                                bool with_margins);

/// Random but always-valid visualization over the schema: 1-2 dims,
/// every binning method, every aggregate function.
VizSpec random_viz(const SchemaInfo& schema, Rng& rng, const std::string& name);

/// Random conjunctive filter with 0-2 atoms drawn from the schema.
FilterPredicate random_filter(const SchemaInfo& schema, Rng& rng);

}  // namespace idebench::testing

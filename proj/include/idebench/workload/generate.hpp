#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "idebench/core/graph.hpp"
#include "idebench/core/json_io.hpp"
#include "idebench/rng.hpp"
#include "idebench/workload/transition.hpp"

namespace idebench {

struct GenerationConfig {
  WorkflowType type = WorkflowType::Mixed;
  std::string name;

  /// Exact interaction count when > 0; when 0 the chain runs until it
  /// samples stop (never before min_interactions).
  size_t interaction_count = 20;
  size_t min_interactions = 5;

  uint64_t rng_seed = 0;
  SchemaInfo schema;

  /// Fan-out range for the linking types (inclusive).
  std::pair<int, int> fan_out{2, 4};
  /// Live-viz budget; mixed workflows discard old charts to stay under it.
  size_t max_vizs = 12;

  std::vector<AggregateFn> aggregates{AggregateFn::Count, AggregateFn::Avg};
  /// Per-type defaults when unset.
  std::optional<TransitionTable> transitions;
};

/// Samples one workflow. Deterministic in rng_seed; the result always
/// passes validate() against the same schema.
Workflow generate(const GenerationConfig& config);

/// Random filter on one column: nominal columns get an equality with a
/// frequency-weighted category, quantitative columns a half-open range
/// whose width is uniform over 5% to 50% of the domain.
FilterPredicate sample_filter(const SchemaInfo& schema,
                              const std::string& column, Rng& rng);

/// Random brush on a rendered viz: one atom per binning dimension, with
/// range endpoints snapped to bin boundaries.
FilterPredicate sample_selection(const VizSpec& viz, const SchemaInfo& schema,
                                 Rng& rng);

struct Violation {
  size_t interaction = 0;  // index into the workflow, or size_t(-1) for global
  std::string message;
};

/// Replays the workflow and checks graph invariants, schema references,
/// and the topology promised by the workflow's type. Empty means clean.
std::vector<Violation> validate(const Workflow& workflow,
                                const SchemaInfo& schema);

}  // namespace idebench

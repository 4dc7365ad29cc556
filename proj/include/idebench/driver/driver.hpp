#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "json.hpp"

#include "idebench/adapters/adapter.hpp"
#include "idebench/adapters/exact.hpp"
#include "idebench/core/graph.hpp"
#include "idebench/driver/thread_pool.hpp"
#include "idebench/metrics/metrics.hpp"

namespace idebench {

/// Knobs for one benchmark pass over a workflow.
struct BenchmarkSettings {
  std::chrono::duration<double> time_requirement{1.0};
  std::chrono::duration<double> think_time{1.0};
  double confidence = 0.95;
  /// Collection overhead allowance: every record must satisfy
  /// end - start <= time_requirement + grace. The driver itself stops
  /// waiting at the deadline; grace only absorbs bookkeeping latency.
  std::chrono::milliseconds grace{100};
  DirtySetOptions dirty;
};

/// One issued query with its timing verdict and quality metrics; one
/// row of the detailed report.
struct QueryRecord {
  uint64_t id = 0;
  size_t interaction = 0;
  std::string viz_name;
  std::string driver;  // adapter name
  uint64_t data_size = 0;
  double think_time_s = 0.0;
  double time_requirement_s = 0.0;
  std::string workflow;
  int64_t start_ms = 0;  // epoch milliseconds
  int64_t end_ms = 0;
  bool tr_violated = false;
  int bin_dims = 1;
  std::string binning_type;  // binning column kinds joined with '_'
  std::string agg_type;
  MetricSet metrics;

  // Not part of the tabular report; carried by the JSON form only.
  std::string interaction_kind;
  double progress = 0.0;
  std::string error;  // engine failure message, empty otherwise
};

nlohmann::json record_to_json(const QueryRecord& record);
QueryRecord record_from_json(const nlohmann::json& j);

/// Exact answers for quality evaluation, memoized on the rendered SQL
/// so replays of the same query across time requirements compare
/// against the identical truth table.
class GroundTruthOracle {
 public:
  explicit GroundTruthOracle(std::shared_ptr<const Dataset> data);

  const ResultTable& truth(const VizSpec& viz, const FilterPredicate& filter);
  size_t cache_size() const;
  const Dataset& data() const { return engine_.data(); }

 private:
  ExactEngine engine_;
  std::map<std::string, ResultTable> cache_;
  mutable std::mutex mutex_;
};

/// Replays workflows against an adapter: maintains the viz graph,
/// fans out one concurrent query per dirty viz with a shared deadline,
/// abandons queries still in flight at the deadline, evaluates metrics
/// off the timed path, and sleeps the think time between interactions.
class Driver {
 public:
  Driver(Adapter& adapter, GroundTruthOracle& oracle, ThreadPool& pool,
         std::shared_ptr<const Dataset> data);

  /// Appends one record per issued query, ordered by
  /// (interaction index, viz name). An adapter hard failure (IoError)
  /// propagates after the records collected so far are preserved.
  void run_workflow(const Workflow& workflow, const BenchmarkSettings& settings,
                    std::vector<QueryRecord>& out);

  std::vector<QueryRecord> run_workflow(const Workflow& workflow,
                                        const BenchmarkSettings& settings);

 private:
  Adapter& adapter_;
  GroundTruthOracle& oracle_;
  ThreadPool& pool_;
  std::shared_ptr<const Dataset> data_;
  uint64_t next_id_ = 0;
};

struct SuiteConfig {
  std::vector<double> time_requirements_s{0.5, 1, 3, 5, 10};
  double think_time_s = 1.0;
  double confidence = 0.95;
  size_t pool_size = 8;
  DirtySetOptions dirty;
};

struct SuiteOutcome {
  std::vector<QueryRecord> records;
  double prep_seconds = 0.0;  // dataset load + adapter setup
  std::string adapter;
  uint64_t data_size = 0;
  std::vector<std::string> failures;  // aborted workflows, suite continued
};

/// Full grid: every time requirement crossed with every workflow, run
/// sequentially against one adapter instance prepared once.
SuiteOutcome run_suite(Adapter& adapter, const DatasetSource& source,
                       const std::vector<Workflow>& workflows,
                       const SuiteConfig& config);

}  // namespace idebench

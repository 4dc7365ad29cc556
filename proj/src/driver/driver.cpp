#include "idebench/driver/driver.hpp"

#include <algorithm>
#include <thread>

#include "idebench/core/json_io.hpp"
#include "idebench/core/sql.hpp"
#include "idebench/data/dataset.hpp"

namespace idebench {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Record serialization (full precision; the 2-decimal tabular form
// lives in the report module)

namespace {

json opt(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

std::optional<double> opt_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

int64_t to_epoch_ms(std::chrono::system_clock::time_point t) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             t.time_since_epoch())
      .count();
}

}  // namespace

json record_to_json(const QueryRecord& r) {
  json j;
  j["id"] = r.id;
  j["interaction"] = r.interaction;
  j["viz_name"] = r.viz_name;
  j["driver"] = r.driver;
  j["data_size"] = r.data_size;
  j["think_time"] = r.think_time_s;
  j["time_requirement"] = r.time_requirement_s;
  j["workflow"] = r.workflow;
  j["start_time"] = r.start_ms;
  j["end_time"] = r.end_ms;
  j["tr_violated"] = r.tr_violated;
  j["bin_dims"] = r.bin_dims;
  j["binning_type"] = r.binning_type;
  j["agg_type"] = r.agg_type;
  if (r.metrics.out_of_margin)
    j["bins_ofm"] = *r.metrics.out_of_margin;
  else
    j["bins_ofm"] = nullptr;
  j["bins_delivered"] = r.metrics.bins_delivered;
  j["bins_in_gt"] = r.metrics.bins_in_truth;
  j["rel_error_avg"] = opt(r.metrics.mre_mean);
  j["rel_error_stdev"] = opt(r.metrics.mre_stdev);
  j["missing_bins"] = opt(r.metrics.missing_bins);
  j["cosine_distance"] = r.metrics.cosine_distance;
  j["margin_avg"] = opt(r.metrics.margin_mean);
  j["margin_stdev"] = opt(r.metrics.margin_stdev);
  j["smape"] = opt(r.metrics.smape);
  j["bias"] = opt(r.metrics.bias);
  j["spurious_bins"] = r.metrics.spurious_bins;
  j["mre_excluded_zero_truth"] = r.metrics.mre_excluded_zero_truth;
  j["margin_excluded"] = r.metrics.margin_excluded;
  j["interaction_kind"] = r.interaction_kind;
  j["progress"] = r.progress;
  j["error"] = r.error;
  return j;
}

QueryRecord record_from_json(const json& j) {
  QueryRecord r;
  r.id = j.at("id").get<uint64_t>();
  r.interaction = j.at("interaction").get<size_t>();
  r.viz_name = j.at("viz_name").get<std::string>();
  r.driver = j.at("driver").get<std::string>();
  r.data_size = j.at("data_size").get<uint64_t>();
  r.think_time_s = j.at("think_time").get<double>();
  r.time_requirement_s = j.at("time_requirement").get<double>();
  r.workflow = j.at("workflow").get<std::string>();
  r.start_ms = j.at("start_time").get<int64_t>();
  r.end_ms = j.at("end_time").get<int64_t>();
  r.tr_violated = j.at("tr_violated").get<bool>();
  r.bin_dims = j.at("bin_dims").get<int>();
  r.binning_type = j.at("binning_type").get<std::string>();
  r.agg_type = j.at("agg_type").get<std::string>();
  if (!j.at("bins_ofm").is_null())
    r.metrics.out_of_margin = j.at("bins_ofm").get<uint64_t>();
  r.metrics.bins_delivered = j.at("bins_delivered").get<size_t>();
  r.metrics.bins_in_truth = j.at("bins_in_gt").get<size_t>();
  r.metrics.mre_mean = opt_from(j, "rel_error_avg");
  r.metrics.mre_stdev = opt_from(j, "rel_error_stdev");
  r.metrics.missing_bins = opt_from(j, "missing_bins");
  r.metrics.cosine_distance = j.at("cosine_distance").get<double>();
  r.metrics.margin_mean = opt_from(j, "margin_avg");
  r.metrics.margin_stdev = opt_from(j, "margin_stdev");
  r.metrics.smape = opt_from(j, "smape");
  r.metrics.bias = opt_from(j, "bias");
  r.metrics.spurious_bins = j.value("spurious_bins", size_t{0});
  r.metrics.mre_excluded_zero_truth = j.value("mre_excluded_zero_truth", size_t{0});
  r.metrics.margin_excluded = j.value("margin_excluded", size_t{0});
  r.metrics.tr_violated = r.tr_violated;
  r.interaction_kind = j.value("interaction_kind", std::string());
  r.progress = j.value("progress", 0.0);
  r.error = j.value("error", std::string());
  return r;
}

// ---------------------------------------------------------------------------
// Ground truth

GroundTruthOracle::GroundTruthOracle(std::shared_ptr<const Dataset> data) {
  if (!data) throw ValidationError("ground-truth oracle needs a dataset");
  engine_.setup(DatasetSource{"", std::move(data)});
}

const ResultTable& GroundTruthOracle::truth(const VizSpec& viz,
                                            const FilterPredicate& filter) {
  const std::string key =
      render_sql(viz, filter, engine_.data().name(), engine_.data().schema());
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  QueryRequest request;
  request.viz = viz;
  request.filter = filter;
  request.table = engine_.data().name();
  request.deadline = std::chrono::steady_clock::time_point::max();
  ResultTable table = engine_.execute(request);
  return cache_.emplace(key, std::move(table)).first->second;
}

size_t GroundTruthOracle::cache_size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return cache_.size();
}

// ---------------------------------------------------------------------------
// Driver

namespace {

std::string binning_kind_string(const VizSpec& viz, const Dataset& data) {
  std::string out;
  for (const auto& dim : viz.binning) {
    if (!out.empty()) out += '_';
    if (!data.has_column(dim.column)) {
      out += "unknown";
      continue;
    }
    const ColumnKind kind = data.schema_of(data.column_index(dim.column)).kind;
    out += kind == ColumnKind::Nominal ? "nominal" : "quantitative";
  }
  return out;
}

void check_settings(const BenchmarkSettings& settings) {
  if (!(settings.time_requirement.count() > 0))
    throw ValidationError("time requirement must be positive");
  if (settings.think_time.count() < 0)
    throw ValidationError("think time must be non-negative");
  if (!(settings.confidence > 0.0 && settings.confidence < 1.0))
    throw ValidationError("confidence must lie in (0,1)");
}

}  // namespace

Driver::Driver(Adapter& adapter, GroundTruthOracle& oracle, ThreadPool& pool,
               std::shared_ptr<const Dataset> data)
    : adapter_(adapter), oracle_(oracle), pool_(pool), data_(std::move(data)) {
  if (!data_) throw ValidationError("driver needs a dataset");
}

std::vector<QueryRecord> Driver::run_workflow(const Workflow& workflow,
                                              const BenchmarkSettings& settings) {
  std::vector<QueryRecord> out;
  run_workflow(workflow, settings, out);
  return out;
}

void Driver::run_workflow(const Workflow& workflow,
                          const BenchmarkSettings& settings,
                          std::vector<QueryRecord>& out) {
  check_settings(settings);
  using clock = std::chrono::steady_clock;
  const auto tr = std::chrono::duration_cast<clock::duration>(
      settings.time_requirement);
  const auto think = std::chrono::duration_cast<clock::duration>(
      settings.think_time);

  VizGraph graph;
  adapter_.workflow_start();
  std::string hard_failure;

  for (size_t index = 0; index < workflow.interactions.size(); ++index) {
    const Interaction& interaction = workflow.interactions[index];
    graph.apply(interaction);
    if (const auto* link = std::get_if<Link>(&interaction))
      adapter_.link_vizs(link->source, link->target);
    else if (const auto* discard = std::get_if<Discard>(&interaction))
      adapter_.delete_vizs({discard->viz});

    const std::set<std::string> dirty =
        dirty_set(graph, interaction, settings.dirty);

    const auto start_steady = clock::now();
    const auto start_wall = std::chrono::system_clock::now();
    const auto deadline = start_steady + tr;

    // Fan-out: every dirty viz is issued before any result is awaited.
    struct Pending {
      std::string viz;
      QueryRequest request;
      std::future<QueryOutcome> future;
    };
    std::vector<Pending> pending;
    pending.reserve(dirty.size());
    for (const std::string& viz : dirty) {
      QueryRequest request;
      request.viz = graph.spec(viz);
      request.filter = effective_filter(graph, viz);
      request.table = data_->name();
      request.deadline = deadline;
      request.confidence = settings.confidence;
      auto run = [this, request]() { return adapter_.process_request(request); };
      pending.push_back(Pending{viz, std::move(request), pool_.submit(std::move(run))});
    }

    // Collection: the driver stops waiting at the deadline regardless
    // of whether the adapter honors cancellation; a query still in
    // flight is abandoned and recorded as a timeout.
    struct Collected {
      const Pending* source = nullptr;
      QueryOutcome outcome;
      int64_t end_ms = 0;
      clock::time_point end_steady;
    };
    std::vector<Collected> collected;
    collected.reserve(pending.size());
    auto last_end = start_steady;
    for (auto& p : pending) {
      Collected c;
      c.source = &p;
      if (p.future.wait_until(deadline) == std::future_status::ready) {
        try {
          c.outcome = p.future.get();
        } catch (const IoError& e) {
          c.outcome = QueryOutcome::failed(e.what());
          if (hard_failure.empty()) hard_failure = e.what();
        } catch (const std::exception& e) {
          c.outcome = QueryOutcome::failed(e.what());
        }
      } else {
        c.outcome = QueryOutcome::timeout();
      }
      c.end_steady = clock::now();
      c.end_ms = to_epoch_ms(std::chrono::system_clock::now());
      last_end = std::max(last_end, c.end_steady);
      collected.push_back(std::move(c));
    }

    // Quality evaluation happens off the timed path. A query the
    // oracle itself rejects (say, a column the schema does not have)
    // cannot be scored; it is kept as a violation so one bad request
    // does not sink the rest of the workflow.
    for (const Collected& c : collected) {
      const QueryRequest& request = c.source->request;
      const ResultTable* truth = nullptr;
      std::string truth_error;
      try {
        truth = &oracle_.truth(request.viz, request.filter);
      } catch (const std::exception& e) {
        truth_error = e.what();
      }
      static const ResultTable kEmpty;
      const ResultTable& delivered =
          c.outcome.result ? *c.outcome.result : kEmpty;

      QueryRecord record;
      record.id = next_id_++;
      record.interaction = index;
      record.viz_name = c.source->viz;
      record.driver = adapter_.name();
      record.data_size = data_->row_count();
      record.think_time_s = settings.think_time.count();
      record.time_requirement_s = settings.time_requirement.count();
      record.workflow = workflow.name;
      record.start_ms = to_epoch_ms(start_wall);
      record.end_ms = c.end_ms;
      record.tr_violated = c.outcome.status != OutcomeStatus::Ok || !truth;
      record.bin_dims = static_cast<int>(request.viz.binning.size());
      record.binning_type = binning_kind_string(request.viz, *data_);
      record.agg_type = to_string(request.viz.aggregate.fn);
      if (truth) {
        record.metrics = compute_all(delivered, *truth);
      } else {
        record.metrics.bins_delivered = delivered.bins.size();
        record.metrics.missing_bins = 1.0;
      }
      record.metrics.tr_violated = record.tr_violated;
      record.interaction_kind = interaction_kind(interaction);
      record.progress = c.outcome.result ? delivered.progress : 0.0;
      record.error = c.outcome.error.empty() ? truth_error : c.outcome.error;
      out.push_back(std::move(record));
    }

    if (!hard_failure.empty()) {
      adapter_.workflow_end();
      throw IoError("adapter failed hard, workflow aborted: " + hard_failure);
    }

    // The user keeps thinking while results are still rendering, so
    // the pause is anchored at the last collection, not at dispatch.
    std::this_thread::sleep_until(last_end + think);
  }

  adapter_.workflow_end();
}

// ---------------------------------------------------------------------------
// Suite

SuiteOutcome run_suite(Adapter& adapter, const DatasetSource& source,
                       const std::vector<Workflow>& workflows,
                       const SuiteConfig& config) {
  if (config.time_requirements_s.empty())
    throw ValidationError("suite needs at least one time requirement");

  SuiteOutcome out;
  const auto t0 = std::chrono::steady_clock::now();
  std::shared_ptr<const Dataset> data = source.preloaded;
  if (!data) data = load_dataset(source.path);
  const std::chrono::duration<double> load_time =
      std::chrono::steady_clock::now() - t0;
  DatasetSource prepared{source.path, data};
  out.prep_seconds = (load_time + adapter.setup(prepared)).count();
  out.adapter = adapter.name();
  out.data_size = data->row_count();

  GroundTruthOracle oracle(data);
  ThreadPool pool(config.pool_size);
  Driver driver(adapter, oracle, pool, data);

  for (double tr : config.time_requirements_s) {
    BenchmarkSettings settings;
    settings.time_requirement = std::chrono::duration<double>(tr);
    settings.think_time = std::chrono::duration<double>(config.think_time_s);
    settings.confidence = config.confidence;
    settings.dirty = config.dirty;
    for (const Workflow& workflow : workflows) {
      try {
        driver.run_workflow(workflow, settings, out.records);
      } catch (const std::exception& e) {
        out.failures.push_back(workflow.name + " @ tr=" + format_double(tr) +
                               "s: " + e.what());
      }
    }
  }
  return out;
}

}  // namespace idebench

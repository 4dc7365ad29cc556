#include <algorithm>
#include <chrono>
#include <set>

#include "doctest.h"
#include "idebench/datagen/seed.hpp"
#include "idebench/driver/driver.hpp"
#include "idebench/workload/generate.hpp"

using namespace idebench;

namespace {

std::shared_ptr<const Dataset> demo(size_t rows = 4000, uint64_t seed = 23) {
  return std::make_shared<Dataset>(make_demo_seed(rows, seed));
}

VizSpec carrier_count(const std::string& name) {
  VizSpec v;
  v.name = name;
  BinningSpec b;
  b.column = "carrier";
  b.method = BinningSpec::Method::Distinct;
  v.binning.push_back(b);
  v.aggregate.fn = AggregateFn::Count;
  return v;
}

FilterPredicate carrier_eq(const std::string& category) {
  FilterAtom a;
  a.column = "carrier";
  a.op = CompareOp::Eq;
  a.category = category;
  FilterPredicate p;
  p.atoms.push_back(a);
  return p;
}

BenchmarkSettings fast_settings() {
  BenchmarkSettings s;
  s.time_requirement = std::chrono::duration<double>(2.0);
  s.think_time = std::chrono::duration<double>(0.0);
  return s;
}

struct Bench {
  std::shared_ptr<const Dataset> data;
  ExactEngine engine;
  GroundTruthOracle oracle;
  ThreadPool pool;
  Driver driver;

  explicit Bench(std::shared_ptr<const Dataset> d)
      : data(d), oracle(d), pool(4), driver(engine, oracle, pool, d) {
    engine.setup({"", data});
  }
};

}  // namespace

TEST_CASE("a single create yields one exact record") {
  Bench bench(demo());
  Workflow w;
  w.name = "mixed_0";
  w.interactions.push_back(CreateViz{carrier_count("a")});

  auto records = bench.driver.run_workflow(w, fast_settings());
  REQUIRE(records.size() == 1);
  const QueryRecord& r = records[0];
  CHECK(r.interaction == 0);
  CHECK(r.viz_name == "a");
  CHECK(r.driver == "exact");
  CHECK(r.workflow == "mixed_0");
  CHECK(r.data_size == bench.data->row_count());
  CHECK(r.time_requirement_s == 2.0);
  CHECK_FALSE(r.tr_violated);
  CHECK(r.bin_dims == 1);
  CHECK(r.binning_type == "nominal");
  CHECK(r.agg_type == "count");
  CHECK(r.interaction_kind == "create");
  CHECK(r.end_ms >= r.start_ms);
  // Exact engine against its own truth: flawless scores.
  CHECK(r.metrics.missing_bins == 0.0);
  CHECK(r.metrics.mre_mean == 0.0);
  CHECK(r.metrics.cosine_distance == 0.0);
  CHECK(r.metrics.bins_delivered == r.metrics.bins_in_truth);
  CHECK(r.error.empty());
}

TEST_CASE("a brush on a hub fans out one concurrent query per dirty viz") {
  Bench bench(demo());
  Workflow w;
  w.name = "one-to-n_0";
  w.type = WorkflowType::OneToN;
  w.interactions.push_back(CreateViz{carrier_count("hub")});
  for (int i = 0; i < 3; ++i) {
    const std::string name = "spoke" + std::to_string(i);
    w.interactions.push_back(CreateViz{carrier_count(name)});
    w.interactions.push_back(Link{"hub", name});
  }
  w.interactions.push_back(Select{"hub", carrier_eq("AA")});

  auto records = bench.driver.run_workflow(w, fast_settings());
  // 4 creates + 3 links (target re-render) + select (hub + 3 spokes).
  std::vector<QueryRecord> brush;
  for (const auto& r : records)
    if (r.interaction == w.interactions.size() - 1) brush.push_back(r);
  REQUIRE(brush.size() == 4);

  // All four share the interaction and were in flight together:
  // every start precedes every end.
  const int64_t max_start =
      std::max_element(brush.begin(), brush.end(),
                       [](const auto& a, const auto& b) {
                         return a.start_ms < b.start_ms;
                       })
          ->start_ms;
  const int64_t min_end =
      std::min_element(brush.begin(), brush.end(),
                       [](const auto& a, const auto& b) {
                         return a.end_ms < b.end_ms;
                       })
          ->end_ms;
  CHECK(max_start <= min_end);

  // Records are ordered by (interaction, viz name).
  for (size_t i = 1; i < records.size(); ++i) {
    CHECK(records[i - 1].interaction <= records[i].interaction);
    if (records[i - 1].interaction == records[i].interaction)
      CHECK(records[i - 1].viz_name < records[i].viz_name);
  }

  // Spokes answered under the hub's selection; their truth reflects it.
  for (const auto& r : brush) {
    if (r.viz_name == "hub") continue;
    CHECK(r.metrics.bins_in_truth == 1);  // only carrier AA remains
    CHECK(r.metrics.missing_bins == 0.0);
  }
}

TEST_CASE("ids are unique and increase across a run") {
  Bench bench(demo());
  Workflow w;
  w.name = "mixed_0";
  w.interactions.push_back(CreateViz{carrier_count("a")});
  w.interactions.push_back(SetFilter{"a", carrier_eq("AA")});
  w.interactions.push_back(SetFilter{"a", carrier_eq("DL")});

  std::vector<QueryRecord> records;
  bench.driver.run_workflow(w, fast_settings(), records);
  bench.driver.run_workflow(w, fast_settings(), records);
  std::set<uint64_t> ids;
  for (const auto& r : records) ids.insert(r.id);
  CHECK(ids.size() == records.size());
}

TEST_CASE("the oracle memoizes identical queries across replays") {
  auto data = demo();
  GroundTruthOracle oracle(data);
  CHECK(oracle.cache_size() == 0);

  const ResultTable& first = oracle.truth(carrier_count("a"), {});
  CHECK(oracle.cache_size() == 1);
  // Same rendered SQL, even under a different viz name: same entry.
  const ResultTable& second = oracle.truth(carrier_count("b"), {});
  CHECK(oracle.cache_size() == 1);
  CHECK(&first == &second);

  oracle.truth(carrier_count("a"), carrier_eq("AA"));
  CHECK(oracle.cache_size() == 2);
}

TEST_CASE("graph violations in a workflow surface as GraphError") {
  Bench bench(demo());
  Workflow w;
  w.name = "mixed_0";
  w.interactions.push_back(SetFilter{"ghost", carrier_eq("AA")});
  std::vector<QueryRecord> records;
  CHECK_THROWS_AS(bench.driver.run_workflow(w, fast_settings(), records),
                  GraphError);
}

TEST_CASE("engine errors are recorded as violations with the message") {
  Bench bench(demo());
  Workflow w;
  w.name = "mixed_0";
  VizSpec bad = carrier_count("a");
  bad.aggregate.fn = AggregateFn::Sum;
  bad.aggregate.column = "no_such";
  w.interactions.push_back(CreateViz{bad});

  auto records = bench.driver.run_workflow(w, fast_settings());
  REQUIRE(records.size() == 1);
  CHECK(records[0].tr_violated);
  CHECK(records[0].error.find("no_such") != std::string::npos);
  CHECK(records[0].metrics.missing_bins == 1.0);  // nothing delivered
}

TEST_CASE("tight deadlines mark exact queries as violations") {
  Bench bench(demo(300000, 29));
  Workflow w;
  w.name = "mixed_0";
  w.interactions.push_back(CreateViz{carrier_count("a")});

  BenchmarkSettings s = fast_settings();
  s.time_requirement = std::chrono::duration<double>(0.00001);
  auto records = bench.driver.run_workflow(w, s);
  REQUIRE(records.size() == 1);
  CHECK(records[0].tr_violated);
  CHECK(records[0].metrics.missing_bins == 1.0);
  CHECK_FALSE(records[0].metrics.mre_mean.has_value());

  // Timing invariant holds even for violations.
  const double elapsed_s =
      double(records[0].end_ms - records[0].start_ms) / 1000.0;
  CHECK(elapsed_s <= s.time_requirement.count() + 0.1);
}

TEST_CASE("replays are identical except for timestamps") {
  auto data = demo();
  GenerationConfig cfg;
  cfg.type = WorkflowType::Sequential;
  cfg.name = "sequential_0";
  cfg.interaction_count = 15;
  cfg.rng_seed = 42;
  cfg.schema = schema_from_dataset(*data);
  Workflow w = generate(cfg);

  auto run = [&]() {
    Bench bench(data);
    return bench.driver.run_workflow(w, fast_settings());
  };
  auto a = run();
  auto b = run();
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    nlohmann::json ja = record_to_json(a[i]);
    nlohmann::json jb = record_to_json(b[i]);
    for (const char* volatile_key : {"start_time", "end_time"}) {
      ja.erase(volatile_key);
      jb.erase(volatile_key);
    }
    CHECK(ja.dump() == jb.dump());
  }
}

TEST_CASE("records survive the json round trip") {
  Bench bench(demo());
  Workflow w;
  w.name = "mixed_0";
  w.interactions.push_back(CreateViz{carrier_count("a")});
  w.interactions.push_back(Select{"a", carrier_eq("AA")});
  auto records = bench.driver.run_workflow(w, fast_settings());

  for (const auto& r : records) {
    QueryRecord back = record_from_json(record_to_json(r));
    CHECK(back.id == r.id);
    CHECK(back.viz_name == r.viz_name);
    CHECK(back.start_ms == r.start_ms);
    CHECK(back.end_ms == r.end_ms);
    CHECK(back.tr_violated == r.tr_violated);
    CHECK(back.metrics.missing_bins == r.metrics.missing_bins);
    CHECK(back.metrics.mre_mean == r.metrics.mre_mean);
    CHECK(back.metrics.out_of_margin == r.metrics.out_of_margin);
    CHECK(back.metrics.bins_delivered == r.metrics.bins_delivered);
    CHECK(back.interaction_kind == r.interaction_kind);
    CHECK(back.error == r.error);
  }
}

TEST_CASE("run_suite crosses time requirements with workflows") {
  auto data = demo(2000, 31);
  ExactEngine engine;
  GenerationConfig cfg;
  cfg.type = WorkflowType::Independent;
  cfg.name = "independent_0";
  cfg.interaction_count = 6;
  cfg.rng_seed = 7;
  cfg.schema = schema_from_dataset(*data);
  std::vector<Workflow> workflows{generate(cfg)};
  cfg.rng_seed = 8;
  cfg.name = "independent_1";
  workflows.push_back(generate(cfg));

  SuiteConfig config;
  config.time_requirements_s = {0.5, 2.0};
  config.think_time_s = 0.0;
  config.pool_size = 2;

  SuiteOutcome outcome = run_suite(engine, {"", data}, workflows, config);
  CHECK(outcome.adapter == "exact");
  CHECK(outcome.data_size == 2000);
  CHECK(outcome.prep_seconds >= 0.0);
  CHECK(outcome.failures.empty());

  // Every (tr, workflow) cell is present in the records.
  std::set<std::pair<std::string, double>> cells;
  for (const auto& r : outcome.records)
    cells.insert({r.workflow, r.time_requirement_s});
  CHECK(cells.size() == 4);
}

TEST_CASE("think time paces interactions") {
  Bench bench(demo(500, 37));
  Workflow w;
  w.name = "mixed_0";
  w.interactions.push_back(CreateViz{carrier_count("a")});
  w.interactions.push_back(SetFilter{"a", carrier_eq("AA")});
  w.interactions.push_back(SetFilter{"a", carrier_eq("DL")});

  BenchmarkSettings s = fast_settings();
  s.think_time = std::chrono::duration<double>(0.15);
  const auto t0 = std::chrono::steady_clock::now();
  auto records = bench.driver.run_workflow(w, s);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  // Three interactions, two think gaps in between at minimum.
  CHECK(elapsed >= 0.3);
  REQUIRE(records.size() == 3);
  CHECK(records[2].start_ms - records[1].end_ms >= 140);
}

// Python bindings. Structured values cross the boundary as JSON text;
// the pure-python wrapper in idebench/__init__.py turns them into
// dicts, which keeps this surface small and the ABI trivial.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "idebench/adapters/adapter.hpp"
#include "idebench/core/json_io.hpp"
#include "idebench/data/dataset.hpp"
#include "idebench/datagen/copula.hpp"
#include "idebench/datagen/normalize.hpp"
#include "idebench/datagen/seed.hpp"
#include "idebench/driver/driver.hpp"
#include "idebench/metrics/metrics.hpp"
#include "idebench/report/report.hpp"
#include "idebench/workload/generate.hpp"
#include "idebench/workload/transition.hpp"

namespace py = pybind11;
using namespace idebench;
using nlohmann::json;

namespace {

std::vector<QueryRecord> records_from_json_text(const std::string& text) {
  const json j = json::parse(text);
  std::vector<QueryRecord> records;
  records.reserve(j.size());
  for (const auto& item : j) records.push_back(record_from_json(item));
  return records;
}

}  // namespace

PYBIND11_MODULE(_idebench, m) {
  m.doc() = "Benchmark harness for interactive data exploration backends";

  py::register_exception<Error>(m, "IdebenchError");

  m.def(
      "make_demo_seed",
      [](const std::string& out_csv, uint64_t rows, uint64_t rng_seed) {
        make_demo_seed(rows, rng_seed).write_csv(out_csv);
      },
      py::arg("out_csv"), py::arg("rows") = 50000, py::arg("rng_seed") = 7,
      "Write a deterministic flights-style demo seed CSV.");

  m.def(
      "scale_dataset",
      [](const std::string& seed_csv, uint64_t rows, const std::string& out_csv,
         uint64_t rng_seed, size_t sample_size) {
        const Dataset seed = Dataset::from_csv(seed_csv, "seed");
        const size_t sample =
            sample_size != 0 ? sample_size
                             : std::min<size_t>(100000, seed.row_count());
        const CopulaModel model = fit(seed, sample, rng_seed);
        Dataset synthetic = synthesize(model, rows, rng_seed);
        synthetic.write_csv(out_csv);
      },
      py::arg("seed_csv"), py::arg("rows"), py::arg("out_csv"),
      py::arg("rng_seed") = 42, py::arg("sample_size") = 0,
      "Scale a seed CSV to the requested row count with the copula model.");

  m.def(
      "dataset_schema",
      [](const std::string& dataset_path) {
        const auto data = load_dataset(dataset_path);
        return schema_to_json(schema_from_dataset(*data)).dump();
      },
      py::arg("dataset_path"),
      "Schema JSON (domains + category frequencies) of a CSV or star dir.");

  m.def(
      "generate_workflow",
      [](const std::string& schema_json, const std::string& type,
         size_t interactions, uint64_t rng_seed, const std::string& name) {
        GenerationConfig config;
        config.schema = schema_from_json(json::parse(schema_json));
        config.type = workflow_type_from_string(type);
        config.interaction_count = interactions;
        config.rng_seed = rng_seed;
        config.name = name;
        return workflow_to_json(generate(config)).dump();
      },
      py::arg("schema_json"), py::arg("type") = "mixed",
      py::arg("interactions") = 20, py::arg("rng_seed") = 42,
      py::arg("name") = "",
      "Generate one workflow; returns its JSON document.");

  m.def(
      "validate_workflow",
      [](const std::string& workflow_json, const std::string& schema_json) {
        const Workflow workflow = workflow_from_json(json::parse(workflow_json));
        const SchemaInfo schema = schema_from_json(json::parse(schema_json));
        std::vector<std::pair<int64_t, std::string>> out;
        for (const Violation& v : validate(workflow, schema))
          out.emplace_back(v.interaction == static_cast<size_t>(-1)
                               ? int64_t{-1}
                               : static_cast<int64_t>(v.interaction),
                           v.message);
        return out;
      },
      py::arg("workflow_json"), py::arg("schema_json"),
      "Violations as (interaction index, message); -1 marks topology-level.");

  m.def(
      "run_benchmark",
      [](const std::string& adapter_selector, const std::string& dataset_path,
         const std::vector<std::string>& workflow_jsons,
         const std::vector<double>& time_requirements, double think_time,
         double confidence, size_t pool_size) {
        auto adapter = make_adapter(adapter_selector);
        std::vector<Workflow> workflows;
        workflows.reserve(workflow_jsons.size());
        for (const auto& text : workflow_jsons)
          workflows.push_back(workflow_from_json(json::parse(text)));
        SuiteConfig config;
        config.time_requirements_s = time_requirements;
        config.think_time_s = think_time;
        config.confidence = confidence;
        config.pool_size = pool_size;
        SuiteOutcome outcome;
        {
          py::gil_scoped_release release;
          outcome = run_suite(*adapter, DatasetSource{dataset_path, nullptr},
                              workflows, config);
        }
        json j;
        j["adapter"] = outcome.adapter;
        j["data_size"] = outcome.data_size;
        j["prep_seconds"] = outcome.prep_seconds;
        j["failures"] = outcome.failures;
        json records = json::array();
        for (const QueryRecord& r : outcome.records)
          records.push_back(record_to_json(r));
        j["records"] = std::move(records);
        return j.dump();
      },
      py::arg("adapter"), py::arg("dataset"), py::arg("workflows"),
      py::arg("time_requirements") = std::vector<double>{0.5, 1, 3, 5, 10},
      py::arg("think_time") = 1.0, py::arg("confidence") = 0.95,
      py::arg("pool_size") = 8,
      "Replay workflows against an adapter; returns the suite outcome JSON.");

  m.def(
      "query",
      [](const std::string& adapter_selector, const std::string& dataset_path,
         const std::string& viz_json, const std::string& filter_json,
         double budget_s, double confidence) {
        auto adapter = make_adapter(adapter_selector);
        auto data = load_dataset(dataset_path);
        adapter->setup(DatasetSource{dataset_path, data});
        QueryRequest request;
        request.viz = viz_from_json(json::parse(viz_json));
        request.filter = filter_json.empty()
                             ? FilterPredicate{}
                             : predicate_from_json(json::parse(filter_json));
        request.table = data->name();
        request.confidence = confidence;
        request.deadline =
            std::chrono::steady_clock::now() +
            std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                std::chrono::duration<double>(budget_s));
        QueryOutcome outcome;
        {
          py::gil_scoped_release release;
          outcome = adapter->process_request(request);
        }
        json j;
        j["status"] = outcome.status == OutcomeStatus::Ok        ? "ok"
                      : outcome.status == OutcomeStatus::Timeout ? "timeout"
                                                                 : "error";
        j["error"] = outcome.error;
        j["result"] = outcome.result ? result_table_to_json(*outcome.result)
                                     : json(nullptr);
        return j.dump();
      },
      py::arg("adapter"), py::arg("dataset"), py::arg("viz"),
      py::arg("filter") = "", py::arg("budget_s") = 10.0,
      py::arg("confidence") = 0.95,
      "One-shot query against an adapter; returns outcome JSON.");

  m.def(
      "compute_metrics",
      [](const std::string& delivered_json, const std::string& truth_json) {
        const ResultTable delivered =
            result_table_from_json(json::parse(delivered_json));
        const ResultTable truth = result_table_from_json(json::parse(truth_json));
        const MetricSet ms = compute_all(delivered, truth);
        json j;
        auto put = [&j](const char* key, const std::optional<double>& v) {
          j[key] = v ? json(*v) : json(nullptr);
        };
        put("missing_bins", ms.missing_bins);
        put("rel_error_avg", ms.mre_mean);
        put("rel_error_stdev", ms.mre_stdev);
        put("smape", ms.smape);
        j["cosine_distance"] = ms.cosine_distance;
        put("margin_avg", ms.margin_mean);
        put("margin_stdev", ms.margin_stdev);
        j["bins_ofm"] = ms.out_of_margin ? json(*ms.out_of_margin) : json(nullptr);
        put("bias", ms.bias);
        j["bins_delivered"] = ms.bins_delivered;
        j["bins_in_gt"] = ms.bins_in_truth;
        j["spurious_bins"] = ms.spurious_bins;
        return j.dump();
      },
      py::arg("delivered"), py::arg("truth"),
      "All quality metrics of a delivered result table vs ground truth.");

  m.def(
      "ground_truth",
      [](const std::string& dataset_path, const std::string& viz_json,
         const std::string& filter_json) {
        auto data = load_dataset(dataset_path);
        GroundTruthOracle oracle(data);
        const VizSpec viz = viz_from_json(json::parse(viz_json));
        const FilterPredicate filter =
            filter_json.empty() ? FilterPredicate{}
                                : predicate_from_json(json::parse(filter_json));
        return result_table_to_json(oracle.truth(viz, filter)).dump();
      },
      py::arg("dataset"), py::arg("viz"), py::arg("filter") = "",
      "Exact result table for a visualization query.");

  m.def(
      "detailed_csv",
      [](const std::string& records_json) {
        return detailed_csv(records_from_json_text(records_json));
      },
      py::arg("records"),
      "Render records (JSON list) as the detailed per-query CSV table.");

  m.def(
      "write_reports",
      [](const std::string& records_json, const std::string& out_dir) {
        write_reports(records_from_json_text(records_json), {}, out_dir);
      },
      py::arg("records"), py::arg("out_dir"),
      "Write detailed.csv, summary.json, summary.svg for the given records.");
}

// Command-line front end: dataset scaling, workflow generation,
// benchmark execution, and report rendering as separate subcommands so
// each pipeline stage can run (and be re-run) on its own.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "idebench/adapters/adapter.hpp"
#include "idebench/core/json_io.hpp"
#include "idebench/data/dataset.hpp"
#include "idebench/datagen/copula.hpp"
#include "idebench/datagen/normalize.hpp"
#include "idebench/datagen/seed.hpp"
#include "idebench/driver/driver.hpp"
#include "idebench/report/report.hpp"
#include "idebench/rng.hpp"
#include "idebench/workload/generate.hpp"
#include "idebench/workload/transition.hpp"

namespace fs = std::filesystem;
using namespace idebench;

namespace {

std::string sibling_json_path(const std::string& path) {
  fs::path p(path);
  p.replace_extension(".json");
  return p.string();
}

void write_text_file(const std::string& path, const std::string& body) {
  if (fs::path(path).has_parent_path())
    fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << body;
}

// ---------------------------------------------------------------------------
// datagen

struct DatagenArgs {
  std::string seed_path, out_path, star_spec_path;
  uint64_t rows = 0;
  uint64_t rng_seed = 42;
  uint64_t sample_size = 0;  // 0 = min(100k, seed rows)
};

void run_datagen(const DatagenArgs& args) {
  const Dataset seed = Dataset::from_csv(args.seed_path, "seed");
  const size_t sample = args.sample_size != 0
                            ? args.sample_size
                            : std::min<size_t>(100000, seed.row_count());
  const CopulaModel model = fit(seed, sample, args.rng_seed);
  Dataset synthetic = synthesize(model, args.rows, args.rng_seed);

  if (!args.star_spec_path.empty()) {
    const StarSchemaSpec spec = load_star_spec_file(args.star_spec_path);
    spec.check(synthetic.schema());
    synthetic.set_name(spec.fact_table);
    const StarTables tables = normalize(synthetic, spec);
    save_star_dir(tables, spec, args.out_path);
    std::cout << "wrote star directory " << args.out_path << " ("
              << synthetic.row_count() << " fact rows, "
              << tables.dimensions.size() << " dimension tables)\n";
  } else {
    synthetic.set_name(fs::path(args.out_path).stem().string());
    if (fs::path(args.out_path).has_parent_path())
      fs::create_directories(fs::path(args.out_path).parent_path());
    synthetic.write_csv(args.out_path);
    std::cout << "wrote " << args.out_path << " (" << synthetic.row_count()
              << " rows, " << synthetic.column_count() << " columns)\n";
  }
  std::cout << "model: " << model.correlated.size()
            << " correlated columns, fit sample " << model.sample_rows
            << " rows, jitter " << format_double(model.jitter) << "\n";
}

// ---------------------------------------------------------------------------
// seedgen: a small deterministic flights-style table so the pipeline
// can be exercised without shipping data files.

void run_seedgen(uint64_t rows, const std::string& out_path,
                 uint64_t rng_seed) {
  Dataset data =
      make_demo_seed(rows, rng_seed, fs::path(out_path).stem().string());
  if (fs::path(out_path).has_parent_path())
    fs::create_directories(fs::path(out_path).parent_path());
  data.write_csv(out_path);
  std::cout << "wrote " << out_path << " (" << rows << " rows)\n";
}

// ---------------------------------------------------------------------------
// workloadgen

struct WorkloadgenArgs {
  std::string schema_path, out_dir, type_name = "mixed", transitions_path;
  size_t count = 20;
  size_t workflows = 1;
  uint64_t rng_seed = 42;
};

void run_workloadgen(const WorkloadgenArgs& args) {
  const SchemaInfo schema = load_schema_file(args.schema_path);
  const WorkflowType type = workflow_type_from_string(args.type_name);
  std::optional<TransitionTable> transitions;
  if (!args.transitions_path.empty()) {
    std::ifstream in(args.transitions_path);
    if (!in) throw IoError("cannot open " + args.transitions_path);
    transitions = TransitionTable::from_json(nlohmann::json::parse(in));
  }
  fs::create_directories(args.out_dir);
  for (size_t i = 0; i < args.workflows; ++i) {
    GenerationConfig config;
    config.type = type;
    config.name = std::string(to_string(type)) + "_" + std::to_string(i);
    config.interaction_count = args.count;
    config.rng_seed = args.rng_seed + i;
    config.schema = schema;
    config.transitions = transitions;
    const Workflow workflow = generate(config);
    const auto violations = validate(workflow, schema);
    if (!violations.empty())
      throw ValidationError("generated workflow failed validation: " +
                            violations.front().message);
    save_workflow_file(workflow,
                       (fs::path(args.out_dir) / (config.name + ".json"))
                           .string());
  }
  std::cout << "wrote " << args.workflows << " " << to_string(type)
            << " workflows (" << args.count << " interactions each) to "
            << args.out_dir << "\n";
}

// ---------------------------------------------------------------------------
// run

struct RunArgs {
  std::string adapter, dataset, workflows_dir, out_path;
  std::vector<double> trs{0.5, 1, 3, 5, 10};
  double think = 1.0;
  double confidence = 0.95;
};

void run_benchmark(const RunArgs& args) {
  auto adapter = make_adapter(args.adapter);
  const std::vector<Workflow> workflows = load_workflow_dir(args.workflows_dir);
  if (workflows.empty())
    throw ValidationError("no workflow JSON files in " + args.workflows_dir);

  SuiteConfig config;
  config.time_requirements_s = args.trs;
  config.think_time_s = args.think;
  config.confidence = args.confidence;
  if (const char* env = std::getenv("IDEBENCH_POOL_SIZE")) {
    config.pool_size = std::strtoul(env, nullptr, 10);
    if (config.pool_size == 0)
      throw ValidationError("IDEBENCH_POOL_SIZE must be a positive integer");
  }

  const SuiteOutcome outcome =
      run_suite(*adapter, DatasetSource{args.dataset, nullptr}, workflows,
                config);

  write_text_file(args.out_path, detailed_csv(outcome.records));
  nlohmann::json sidecar;
  sidecar["adapter"] = outcome.adapter;
  sidecar["data_size"] = outcome.data_size;
  sidecar["prep_seconds"] = outcome.prep_seconds;
  sidecar["failures"] = outcome.failures;
  nlohmann::json recs = nlohmann::json::array();
  for (const QueryRecord& r : outcome.records) recs.push_back(record_to_json(r));
  sidecar["records"] = std::move(recs);
  write_text_file(sibling_json_path(args.out_path), sidecar.dump(2) + "\n");

  for (const std::string& failure : outcome.failures)
    std::cerr << "workflow failed: " << failure << "\n";
  std::cout << "wrote " << outcome.records.size() << " records to "
            << args.out_path << " (prep "
            << format_fixed2(outcome.prep_seconds) << "s, "
            << outcome.failures.size() << " failed workflows)\n";
}

// ---------------------------------------------------------------------------
// report

void run_report(const std::vector<std::string>& record_paths,
                const std::string& out_dir) {
  std::vector<QueryRecord> records;
  std::vector<PrepInfo> prep;
  for (const std::string& path : record_paths) {
    std::vector<QueryRecord> part = load_detailed_csv(path);
    records.insert(records.end(), part.begin(), part.end());
    // The run subcommand leaves a sidecar JSON with the prep time; use
    // it when present, the CSV alone still yields a full summary.
    const std::string sidecar = sibling_json_path(path);
    std::ifstream in(sidecar);
    if (in) {
      const auto j = nlohmann::json::parse(in);
      if (j.contains("prep_seconds"))
        prep.push_back({j.value("adapter", std::string()),
                        j.value("data_size", uint64_t{0}),
                        j["prep_seconds"].get<double>()});
    }
  }
  write_reports(records, prep, out_dir);
  std::cout << "wrote detailed.csv, summary.json, summary.svg to " << out_dir
            << " (" << records.size() << " records)\n";
}

// ---------------------------------------------------------------------------
// misc helpers

void run_schema(const std::string& dataset_path, const std::string& out_path) {
  const auto data = load_dataset(dataset_path);
  save_schema_file(schema_from_dataset(*data), out_path);
  std::cout << "wrote " << out_path << " (" << data->column_count()
            << " columns, " << data->row_count() << " rows)\n";
}

int run_validate(const std::string& workflows_dir,
                 const std::string& schema_path) {
  const SchemaInfo schema = load_schema_file(schema_path);
  size_t bad = 0;
  for (const Workflow& workflow : load_workflow_dir(workflows_dir)) {
    const auto violations = validate(workflow, schema);
    for (const Violation& v : violations) {
      std::cerr << workflow.name << ": interaction "
                << (v.interaction == static_cast<size_t>(-1)
                        ? std::string("(topology)")
                        : std::to_string(v.interaction))
                << ": " << v.message << "\n";
    }
    bad += violations.empty() ? 0 : 1;
  }
  if (bad == 0) std::cout << "all workflows valid\n";
  return bad == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark harness for interactive data exploration backends"};
  app.require_subcommand(1);

  DatagenArgs datagen_args;
  auto* datagen = app.add_subcommand(
      "datagen", "Scale a seed CSV to n rows with a Gaussian copula model");
  datagen->add_option("--seed", datagen_args.seed_path, "Seed CSV (header row)")
      ->required();
  datagen->add_option("--rows", datagen_args.rows, "Rows to synthesize")
      ->required();
  datagen->add_option("--out", datagen_args.out_path,
                      "Output CSV (or directory with --schema)")
      ->required();
  datagen->add_option("--schema", datagen_args.star_spec_path,
                      "Star-schema spec JSON; normalizes the output");
  datagen->add_option("--rng", datagen_args.rng_seed, "Random seed");
  datagen->add_option("--sample-size", datagen_args.sample_size,
                      "Fit sample size (default min(100k, seed rows))");

  uint64_t seed_rows = 50000, seed_rng = 7;
  std::string seed_out;
  auto* seedgen = app.add_subcommand(
      "seedgen", "Generate a small synthetic flights-style seed CSV");
  seedgen->add_option("--rows", seed_rows, "Row count");
  seedgen->add_option("--out", seed_out, "Output CSV")->required();
  seedgen->add_option("--rng", seed_rng, "Random seed");

  std::string schema_dataset, schema_out;
  auto* schema = app.add_subcommand(
      "schema", "Derive a schema JSON (domains, category frequencies)");
  schema->add_option("--dataset", schema_dataset, "CSV file or star directory")
      ->required();
  schema->add_option("--out", schema_out, "Output schema JSON")->required();

  WorkloadgenArgs wl_args;
  auto* workloadgen =
      app.add_subcommand("workloadgen", "Generate exploration workflows");
  workloadgen->add_option("--schema", wl_args.schema_path, "Schema JSON")
      ->required();
  workloadgen->add_option("--type", wl_args.type_name,
                          "independent|sequential|one-to-n|n-to-one|mixed");
  workloadgen->add_option("--count", wl_args.count, "Interactions per workflow");
  workloadgen->add_option("--workflows", wl_args.workflows,
                          "Number of workflows");
  workloadgen->add_option("--rng", wl_args.rng_seed, "Random seed");
  workloadgen->add_option("--out", wl_args.out_dir, "Output directory")
      ->required();
  workloadgen->add_option("--transitions", wl_args.transitions_path,
                          "Override transition table JSON");

  std::string validate_dir, validate_schema;
  auto* validate_cmd = app.add_subcommand(
      "validate", "Check workflow files against a schema");
  validate_cmd->add_option("--workflows", validate_dir, "Workflow directory")
      ->required();
  validate_cmd->add_option("--schema", validate_schema, "Schema JSON")
      ->required();

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Replay workflows against an adapter");
  run->add_option("--adapter", run_args.adapter,
                  "exact | progressive | subprocess:<command>")
      ->required();
  run->add_option("--dataset", run_args.dataset, "CSV file or star directory")
      ->required();
  run->add_option("--workflows", run_args.workflows_dir, "Workflow directory")
      ->required();
  run->add_option("--tr", run_args.trs, "Time requirements in seconds")
      ->delimiter(',');
  run->add_option("--think", run_args.think, "Think time in seconds");
  run->add_option("--confidence", run_args.confidence,
                  "Confidence level for margins");
  run->add_option("--out", run_args.out_path, "Output records CSV")->required();

  std::vector<std::string> report_paths;
  std::string report_out;
  auto* report =
      app.add_subcommand("report", "Aggregate record CSVs into reports");
  report->add_option("--records", report_paths, "Record CSV files")->required();
  report->add_option("--out", report_out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (datagen->parsed()) run_datagen(datagen_args);
    if (seedgen->parsed()) run_seedgen(seed_rows, seed_out, seed_rng);
    if (schema->parsed()) run_schema(schema_dataset, schema_out);
    if (workloadgen->parsed()) run_workloadgen(wl_args);
    if (validate_cmd->parsed()) return run_validate(validate_dir, validate_schema);
    if (run->parsed()) run_benchmark(run_args);
    if (report->parsed()) run_report(report_paths, report_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

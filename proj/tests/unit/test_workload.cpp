#include <map>
#include <set>

#include "doctest.h"
#include "idebench/core/json_io.hpp"
#include "idebench/datagen/seed.hpp"
#include "idebench/workload/generate.hpp"
#include "idebench/workload/transition.hpp"

using namespace idebench;

namespace {

SchemaInfo demo_schema() {
  return schema_from_dataset(make_demo_seed(2000, 5));
}

GenerationConfig config_for(WorkflowType type, uint64_t seed,
                            size_t interactions = 20) {
  GenerationConfig c;
  c.type = type;
  c.name = std::string(to_string(type)) + "_" + std::to_string(seed);
  c.interaction_count = interactions;
  c.rng_seed = seed;
  c.schema = demo_schema();
  return c;
}

size_t count_kind(const Workflow& w, const char* kind) {
  size_t n = 0;
  for (const auto& i : w.interactions)
    if (std::string(interaction_kind(i)) == kind) ++n;
  return n;
}

}  // namespace

// ---------------------------------------------------------------------------
// Transition tables

TEST_CASE("shipped transition tables are valid row-stochastic matrices") {
  for (auto type : {WorkflowType::Independent, WorkflowType::Sequential,
                    WorkflowType::OneToN, WorkflowType::NToOne,
                    WorkflowType::Mixed}) {
    TransitionTable t = TransitionTable::for_type(type);
    t.check();  // row sums, non-negativity, absorbing stop
    double sum = 0.0;
    for (size_t j = 0; j < kChainStates; ++j)
      sum += t.probability(ChainState::Create, static_cast<ChainState>(j));
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("table validation rejects broken matrices") {
  TransitionTable t = TransitionTable::for_type(WorkflowType::Mixed);
  t.set_row(ChainState::Filter, {0.5, 0.1, 0, 0, 0, 0});  // sums to 0.6
  CHECK_THROWS_AS(t.check(), ValidationError);

  t = TransitionTable::for_type(WorkflowType::Mixed);
  t.set_row(ChainState::Stop, {0.5, 0, 0, 0, 0, 0.5});  // stop must absorb
  CHECK_THROWS_AS(t.check(), ValidationError);

  t = TransitionTable::for_type(WorkflowType::Mixed);
  t.set_row(ChainState::Create, {1.2, -0.2, 0, 0, 0, 0});
  CHECK_THROWS_AS(t.check(), ValidationError);
}

// Expected values are the exact left eigenvectors of the shipped
// matrices (renormalized over non-stop states), computed independently
// with numpy.linalg.eig.
TEST_CASE("stationary distribution matches the eigenvector oracle") {
  auto independent_pi = TransitionTable::for_type(WorkflowType::Independent)
                         .stationary_without_stop();
  CHECK(independent_pi[0] == doctest::Approx(2.0 / 7.0).epsilon(1e-9));
  CHECK(independent_pi[1] == doctest::Approx(4.0 / 7.0).epsilon(1e-9));
  CHECK(independent_pi[2] == 0.0);
  CHECK(independent_pi[3] == 0.0);
  CHECK(independent_pi[4] == doctest::Approx(1.0 / 7.0).epsilon(1e-9));

  auto mixed =
      TransitionTable::for_type(WorkflowType::Mixed).stationary_without_stop();
  CHECK(mixed[0] == doctest::Approx(0.2328445747800588).epsilon(1e-9));
  CHECK(mixed[1] == doctest::Approx(0.3819973932877158).epsilon(1e-9));
  CHECK(mixed[2] == doctest::Approx(0.161111111111111).epsilon(1e-9));
  CHECK(mixed[3] == doctest::Approx(0.12404692082111438).epsilon(1e-9));
  CHECK(mixed[4] == doctest::Approx(0.09999999999999996).epsilon(1e-9));
}

TEST_CASE("feasibility mask renormalizes the sampled row") {
  TransitionTable t = TransitionTable::for_type(WorkflowType::Mixed);
  Rng rng(6);

  // Only one feasible state: always picked, whatever the row says.
  for (int i = 0; i < 100; ++i)
    CHECK(t.sample(ChainState::Filter, chain_bit(ChainState::Discard), rng) ==
          ChainState::Discard);

  // Two feasible states keep their relative odds (mixed filter row:
  // create .20 vs filter .40, so 1:2).
  std::map<ChainState, int> counts;
  const uint32_t mask =
      chain_bit(ChainState::Create) | chain_bit(ChainState::Filter);
  for (int i = 0; i < 30000; ++i) ++counts[t.sample(ChainState::Filter, mask, rng)];
  CHECK(counts.size() == 2);
  const double frac =
      double(counts[ChainState::Create]) /
      double(counts[ChainState::Create] + counts[ChainState::Filter]);
  CHECK(frac == doctest::Approx(1.0 / 3.0).epsilon(0.05));

  // A row with zero feasible mass falls back to uniform; no mass at all
  // is a caller bug.
  TransitionTable zero;
  zero.set_row(ChainState::Create, {0, 0, 0, 0, 0, 1});
  counts.clear();
  for (int i = 0; i < 10000; ++i) ++counts[zero.sample(ChainState::Create, mask, rng)];
  CHECK(double(counts[ChainState::Create]) / 10000.0 ==
        doctest::Approx(0.5).epsilon(0.1));
  CHECK_THROWS_AS(t.sample(ChainState::Create, 0, rng), ValidationError);
}

TEST_CASE("transition tables survive json") {
  TransitionTable t = TransitionTable::for_type(WorkflowType::Sequential);
  TransitionTable back = TransitionTable::from_json(t.to_json());
  for (size_t i = 0; i < kChainStates; ++i)
    for (size_t j = 0; j < kChainStates; ++j)
      CHECK(back.probability(static_cast<ChainState>(i),
                             static_cast<ChainState>(j)) ==
            t.probability(static_cast<ChainState>(i),
                          static_cast<ChainState>(j)));
}

// ---------------------------------------------------------------------------
// Filter and selection sampling

TEST_CASE("sampled filters respect column domains") {
  SchemaInfo schema = demo_schema();
  Rng rng(7);
  for (int i = 0; i < 300; ++i) {
    FilterPredicate p = sample_filter(schema, "dep_delay", rng);
    REQUIRE(p.atoms.size() == 1);
    const FilterAtom& a = p.atoms[0];
    CHECK(a.op == CompareOp::InRange);
    const ColumnSchema& col = schema.column("dep_delay");
    CHECK(a.low >= col.min);
    CHECK(a.high <= col.max + 1e-9);
    const double w = (a.high - a.low) / (col.max - col.min);
    CHECK(w >= 0.05 - 1e-12);
    CHECK(w <= 0.50 + 1e-12);
  }
  std::set<std::string> seen;
  for (int i = 0; i < 200; ++i) {
    FilterPredicate p = sample_filter(schema, "carrier", rng);
    REQUIRE(p.atoms.size() == 1);
    CHECK(p.atoms[0].op == CompareOp::Eq);
    seen.insert(p.atoms[0].category);
  }
  // Frequency weighting still reaches several categories.
  CHECK(seen.size() >= 3);
  for (const auto& c : seen) {
    const auto& cats = schema.column("carrier").categories;
    CHECK(std::find(cats.begin(), cats.end(), c) != cats.end());
  }
}

TEST_CASE("sampled selections brush real bins of the viz") {
  SchemaInfo schema = demo_schema();
  Rng rng(9);

  VizSpec viz;
  viz.name = "v";
  BinningSpec dim;
  dim.column = "distance";
  dim.method = BinningSpec::Method::FixedCount;
  dim.bin_count = 10;
  viz.binning.push_back(dim);

  const ColumnSchema& col = schema.column("distance");
  const double width = (col.max - col.min) / 10.0;
  for (int i = 0; i < 200; ++i) {
    FilterPredicate p = sample_selection(viz, schema, rng);
    REQUIRE(p.atoms.size() == 1);
    const FilterAtom& a = p.atoms[0];
    CHECK(a.op == CompareOp::InRange);
    // Endpoints sit on bin boundaries (grid positions of the binning).
    const double lo_pos = (a.low - col.min) / width;
    CHECK(lo_pos == doctest::Approx(std::round(lo_pos)).epsilon(1e-9));
    CHECK(a.low >= col.min - 1e-9);
    CHECK(a.high <= std::nextafter(col.max, 1e300));
  }

  VizSpec nominal_viz;
  nominal_viz.name = "n";
  BinningSpec nd;
  nd.column = "carrier";
  nd.method = BinningSpec::Method::Distinct;
  nominal_viz.binning.push_back(nd);
  FilterPredicate p = sample_selection(nominal_viz, schema, rng);
  REQUIRE(p.atoms.size() == 1);
  CHECK(p.atoms[0].op == CompareOp::Eq);
}

// ---------------------------------------------------------------------------
// Workflow generation

TEST_CASE("generated workflows validate clean for every type and seed") {
  SchemaInfo schema = demo_schema();
  for (auto type : {WorkflowType::Independent, WorkflowType::Sequential,
                    WorkflowType::OneToN, WorkflowType::NToOne,
                    WorkflowType::Mixed}) {
    for (uint64_t seed = 1; seed <= 8; ++seed) {
      GenerationConfig c = config_for(type, seed);
      Workflow w = generate(c);
      CHECK(w.type == type);
      CHECK(w.interactions.size() == 20);  // exact budget honored
      auto violations = validate(w, schema);
      for (const auto& v : violations)
        MESSAGE("type ", to_string(type), " seed ", seed, " interaction ",
                v.interaction, ": ", v.message);
      CHECK(violations.empty());
    }
  }
}

TEST_CASE("generation is deterministic in the seed") {
  GenerationConfig c = config_for(WorkflowType::Mixed, 99);
  const std::string a = workflow_to_json(generate(c)).dump();
  const std::string b = workflow_to_json(generate(c)).dump();
  c.rng_seed = 100;
  const std::string other = workflow_to_json(generate(c)).dump();
  CHECK(a == b);
  CHECK(a != other);
}

TEST_CASE("linking types produce their promised topology") {
  SchemaInfo schema = demo_schema();

  Workflow star = generate(config_for(WorkflowType::OneToN, 12, 24));
  size_t links = count_kind(star, "link");
  CHECK(links >= 2);
  // All links share one source.
  std::set<std::string> sources, targets;
  for (const auto& i : star.interactions)
    if (const auto* l = std::get_if<Link>(&i)) {
      sources.insert(l->source);
      targets.insert(l->target);
    }
  CHECK(sources.size() == 1);
  CHECK(targets.size() == links);

  Workflow funnel = generate(config_for(WorkflowType::NToOne, 12, 24));
  sources.clear();
  targets.clear();
  for (const auto& i : funnel.interactions)
    if (const auto* l = std::get_if<Link>(&i)) {
      sources.insert(l->source);
      targets.insert(l->target);
    }
  CHECK(targets.size() == 1);
  CHECK(sources.size() >= 2);

  Workflow chain = generate(config_for(WorkflowType::Sequential, 12, 24));
  std::map<std::string, int> out_degree, in_degree;
  size_t chain_links = 0;
  for (const auto& i : chain.interactions)
    if (const auto* l = std::get_if<Link>(&i)) {
      ++out_degree[l->source];
      ++in_degree[l->target];
      ++chain_links;
    }
  CHECK(chain_links >= 1);
  for (const auto& [name, d] : out_degree) CHECK(d == 1);
  for (const auto& [name, d] : in_degree) CHECK(d == 1);

  Workflow independent = generate(config_for(WorkflowType::Independent, 12));
  CHECK(count_kind(independent, "link") == 0);
  CHECK(count_kind(independent, "select") == 0);
}

TEST_CASE("stop-driven generation respects the minimum length") {
  GenerationConfig c = config_for(WorkflowType::Mixed, 3, 0);
  c.interaction_count = 0;  // run until the chain stops
  c.min_interactions = 8;
  Workflow w = generate(c);
  CHECK(w.interactions.size() >= 8);
  CHECK(validate(w, c.schema).empty());
}

TEST_CASE("impossible budgets are rejected up front") {
  // Fan-out 5 needs 11 interactions; 6 cannot fit a hub star.
  GenerationConfig c = config_for(WorkflowType::OneToN, 1, 6);
  c.fan_out = {5, 5};
  CHECK_THROWS_AS(generate(c), ValidationError);

  GenerationConfig empty = config_for(WorkflowType::Mixed, 1);
  empty.schema.columns.clear();
  CHECK_THROWS_AS(generate(empty), ValidationError);
}

TEST_CASE("mixed workflows respect the live viz budget") {
  GenerationConfig c = config_for(WorkflowType::Mixed, 17, 60);
  c.max_vizs = 4;
  Workflow w = generate(c);
  CHECK(validate(w, c.schema).empty());

  VizGraph g;
  size_t peak = 0;
  for (const auto& i : w.interactions) {
    g.apply(i);
    peak = std::max(peak, g.live_names().size());
  }
  CHECK(peak <= 4);
  CHECK(count_kind(w, "discard") > 0);  // budget forces retirement
}

// ---------------------------------------------------------------------------
// Validation catches hand-broken workflows

TEST_CASE("validate pinpoints schema violations") {
  SchemaInfo schema = demo_schema();
  Workflow w = generate(config_for(WorkflowType::Sequential, 4));

  // Point a filter at a column the schema does not have.
  Workflow broken = w;
  bool patched = false;
  for (auto& i : broken.interactions) {
    if (auto* f = std::get_if<SetFilter>(&i)) {
      f->predicate.atoms[0].column = "haunted";
      patched = true;
      break;
    }
  }
  REQUIRE(patched);
  auto violations = validate(broken, schema);
  REQUIRE_FALSE(violations.empty());
  CHECK(violations[0].message.find("haunted") != std::string::npos);

  // Equality against a quantitative column.
  broken = w;
  for (auto& i : broken.interactions) {
    if (auto* f = std::get_if<SetFilter>(&i)) {
      f->predicate.atoms[0] = FilterAtom{};
      f->predicate.atoms[0].column = "dep_delay";
      f->predicate.atoms[0].op = CompareOp::Eq;
      f->predicate.atoms[0].category = "AA";
      break;
    }
  }
  CHECK_FALSE(validate(broken, schema).empty());

  // Inverted range.
  broken = w;
  for (auto& i : broken.interactions) {
    if (auto* f = std::get_if<SetFilter>(&i)) {
      f->predicate.atoms[0] = FilterAtom{};
      f->predicate.atoms[0].column = "dep_delay";
      f->predicate.atoms[0].op = CompareOp::InRange;
      f->predicate.atoms[0].low = 10.0;
      f->predicate.atoms[0].high = -10.0;
      break;
    }
  }
  CHECK_FALSE(validate(broken, schema).empty());
}

TEST_CASE("validate replays the graph and flags the exact interaction") {
  SchemaInfo schema = demo_schema();
  Workflow w;
  w.name = "sequential_0";
  w.type = WorkflowType::Sequential;

  VizSpec v;
  v.name = "a";
  BinningSpec b;
  b.column = "carrier";
  b.method = BinningSpec::Method::Distinct;
  v.binning.push_back(b);
  w.interactions.push_back(CreateViz{v});
  FilterAtom atom;
  atom.column = "carrier";
  atom.op = CompareOp::Eq;
  atom.category = "AA";
  FilterPredicate p;
  p.atoms.push_back(atom);
  w.interactions.push_back(SetFilter{"ghost", p});  // index 1 is broken

  auto violations = validate(w, schema);
  REQUIRE_FALSE(violations.empty());
  CHECK(violations[0].interaction == 1);
  CHECK(violations[0].message.find("ghost") != std::string::npos);
}

TEST_CASE("validate enforces the declared topology") {
  SchemaInfo schema = demo_schema();
  VizSpec v;
  v.name = "a";
  BinningSpec b;
  b.column = "carrier";
  b.method = BinningSpec::Method::Distinct;
  v.binning.push_back(b);

  // A workflow claiming one-to-n but containing a single link.
  Workflow w;
  w.name = "one-to-n_0";
  w.type = WorkflowType::OneToN;
  w.interactions.push_back(CreateViz{v});
  VizSpec v2 = v;
  v2.name = "b";
  w.interactions.push_back(CreateViz{v2});
  w.interactions.push_back(Link{"a", "b"});
  auto violations = validate(w, schema);
  REQUIRE_FALSE(violations.empty());
  CHECK(violations[0].interaction == static_cast<size_t>(-1));

  // Independent workflows may not link at all.
  w.type = WorkflowType::Independent;
  w.name = "independent_0";
  CHECK_FALSE(validate(w, schema).empty());

  // The same shape is fine when declared mixed.
  w.type = WorkflowType::Mixed;
  w.name = "mixed_0";
  CHECK(validate(w, schema).empty());
}

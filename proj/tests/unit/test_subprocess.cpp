#include <chrono>

#include "doctest.h"
#include "idebench/adapters/subprocess.hpp"

using namespace idebench;
using steady = std::chrono::steady_clock;

namespace {

const std::string kMock = std::string("python3 ") + IDEBENCH_TEST_DIR +
                          "/mock_adapter.py";

QueryRequest carrier_count(std::chrono::milliseconds budget) {
  QueryRequest r;
  r.table = "flights";
  r.viz.name = "v";
  BinningSpec b;
  b.column = "carrier";
  b.method = BinningSpec::Method::Distinct;
  r.viz.binning.push_back(b);
  r.viz.aggregate.fn = AggregateFn::Count;
  r.deadline = steady::now() + budget;
  return r;
}

}  // namespace

TEST_CASE("subprocess adapter round-trips queries over the pipe") {
  SubprocessAdapter adapter(kMock);
  adapter.setup({"demo.csv", nullptr});
  CHECK(adapter.name() == "subprocess:python3");

  QueryRequest r = carrier_count(std::chrono::seconds(5));
  FilterAtom atom;
  atom.column = "origin";
  atom.op = CompareOp::Eq;
  atom.category = "JFK";
  r.filter.atoms = {atom, atom};

  QueryOutcome out = adapter.process_request(r);
  REQUIRE(out.status == OutcomeStatus::Ok);
  REQUIRE(out.result.has_value());
  REQUIRE(out.result->bins.size() == 1);
  const auto& [key, value] = *out.result->bins.begin();
  CHECK(std::get<std::string>(key.parts[0]) == "carrier");
  CHECK(value.estimate == 2.0);  // the mock echoes the atom count

  // Lifecycle notifications must not wedge the pipe.
  adapter.workflow_start();
  adapter.link_vizs("a", "b");
  adapter.delete_vizs({"a"});
  adapter.workflow_end();
  out = adapter.process_request(carrier_count(std::chrono::seconds(5)));
  CHECK(out.status == OutcomeStatus::Ok);
}

TEST_CASE("malformed answers surface as errors, not crashes") {
  SubprocessAdapter adapter(kMock + " malformed");
  adapter.setup({"demo.csv", nullptr});
  QueryOutcome out = adapter.process_request(carrier_count(std::chrono::seconds(5)));
  CHECK(out.status == OutcomeStatus::Error);
  CHECK(out.error.find("malformed") != std::string::npos);
}

TEST_CASE("slow answers time out and stale lines are discarded") {
  SubprocessAdapter adapter(kMock + " slow");
  adapter.setup({"demo.csv", nullptr});

  // 50 ms budget against a 300 ms engine: timeout.
  QueryOutcome out = adapter.process_request(carrier_count(std::chrono::milliseconds(50)));
  CHECK(out.status == OutcomeStatus::Timeout);

  // The late answer to the abandoned query must not be mistaken for
  // this one's.
  out = adapter.process_request(carrier_count(std::chrono::seconds(5)));
  REQUIRE(out.status == OutcomeStatus::Ok);
  CHECK(out.result->bins.size() == 1);
}

TEST_CASE("an expired deadline never reaches the child") {
  SubprocessAdapter adapter(kMock);
  adapter.setup({"demo.csv", nullptr});
  QueryOutcome out = adapter.process_request(carrier_count(std::chrono::milliseconds(-10)));
  CHECK(out.status == OutcomeStatus::Timeout);
}

TEST_CASE("a dead child reports io errors on setup") {
  SubprocessAdapter adapter("false");
  CHECK_THROWS_AS(adapter.setup({"demo.csv", nullptr}), IoError);
}

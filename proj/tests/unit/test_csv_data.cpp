#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "idebench/core/json_io.hpp"
#include "idebench/data/csv.hpp"
#include "idebench/data/dataset.hpp"

using namespace idebench;

namespace {

// Unique scratch path under the build tree's working directory.
std::string scratch(const std::string& leaf) {
  auto dir = std::filesystem::temp_directory_path() / "idebench_tests";
  std::filesystem::create_directories(dir);
  return (dir / leaf).string();
}

}  // namespace

TEST_CASE("csv parser handles quoting, embedded commas, and newlines") {
  std::istringstream in(
      "a,b,c\n"
      "1,\"two, three\",\"say \"\"hi\"\"\"\n"
      "\"multi\nline\",,x\r\n"
      "4,5,6");
  std::vector<std::string> fields;

  REQUIRE(csv::read_record(in, fields));
  CHECK(fields == std::vector<std::string>{"a", "b", "c"});
  REQUIRE(csv::read_record(in, fields));
  CHECK(fields == std::vector<std::string>{"1", "two, three", "say \"hi\""});
  REQUIRE(csv::read_record(in, fields));
  CHECK(fields == std::vector<std::string>{"multi\nline", "", "x"});
  REQUIRE(csv::read_record(in, fields));
  CHECK(fields == std::vector<std::string>{"4", "5", "6"});
  CHECK_FALSE(csv::read_record(in, fields));
}

TEST_CASE("csv writer escapes exactly what needs escaping") {
  CHECK(csv::escape_field("plain") == "plain");
  CHECK(csv::escape_field("a,b") == "\"a,b\"");
  CHECK(csv::escape_field("q\"q") == "\"q\"\"q\"");
  CHECK(csv::escape_field("nl\nnl") == "\"nl\nnl\"");

  std::ostringstream out;
  csv::write_record(out, {"x", "a,b", ""});
  CHECK(out.str() == "x,\"a,b\",\n");
}

TEST_CASE("dataset infers column kinds and domain statistics from csv") {
  const std::string path = scratch("flights_mini.csv");
  {
    std::ofstream out(path);
    out << "carrier,dep_delay,origin\n"
           "AA,5,JFK\n"
           "DL,-3.5,LAX\n"
           "AA,,JFK\n"
           "UA,12,SFO\n";
  }
  Dataset d = Dataset::from_csv(path, "flights");
  CHECK(d.name() == "flights");
  CHECK(d.row_count() == 4);
  REQUIRE(d.column_count() == 3);

  CHECK(d.schema_of(0).kind == ColumnKind::Nominal);
  CHECK(d.schema_of(0).categories == std::vector<std::string>{"AA", "DL", "UA"});
  CHECK(d.schema_of(1).kind == ColumnKind::Quantitative);
  CHECK(d.schema_of(1).min == -3.5);
  CHECK(d.schema_of(1).max == 12.0);

  CHECK(d.column_index("origin") == 2);
  CHECK(d.has_column("dep_delay"));
  CHECK_FALSE(d.has_column("nope"));
  CHECK_THROWS_AS(d.column_index("nope"), ValidationError);

  CHECK(d.category_at(0, 1) == "DL");
  CHECK(d.number_at(1, 0) == 5.0);
  CHECK(std::isnan(d.number_at(1, 2)));  // empty numeric field -> null

  auto counts = d.category_counts(0);
  REQUIRE(counts.size() == 3);
  CHECK(counts[0] == std::pair<std::string, uint64_t>{"AA", 2});

  // Round trip through write_csv preserves values and kinds.
  const std::string copy = scratch("flights_mini_copy.csv");
  d.write_csv(copy);
  Dataset d2 = Dataset::from_csv(copy, "flights");
  CHECK(d2.row_count() == d.row_count());
  CHECK(d2.schema_of(1).kind == ColumnKind::Quantitative);
  CHECK(d2.number_at(1, 3) == 12.0);
  CHECK(std::isnan(d2.number_at(1, 2)));
  CHECK(d2.category_at(2, 3) == "SFO");
}

TEST_CASE("a column with any non-numeric text loads as nominal") {
  const std::string path = scratch("mixed.csv");
  {
    std::ofstream out(path);
    out << "v\n1\n2\nx\n";
  }
  Dataset d = Dataset::from_csv(path, "t");
  CHECK(d.schema_of(0).kind == ColumnKind::Nominal);
  CHECK(d.schema_of(0).categories.size() == 3);
}

TEST_CASE("ragged csv rows are rejected") {
  const std::string path = scratch("ragged.csv");
  {
    std::ofstream out(path);
    out << "a,b\n1,2\n3\n";
  }
  CHECK_THROWS_AS(Dataset::from_csv(path, "t"), IoError);
  CHECK_THROWS_AS(Dataset::from_csv(scratch("missing.csv"), "t"), IoError);
}

TEST_CASE("programmatic construction matches csv loading") {
  Dataset d("t");
  d.add_nominal_column("k", {"x", "y", "x"});
  d.add_quantitative_column("v", {1.0, std::nan(""), 3.0});
  CHECK(d.row_count() == 3);
  CHECK(d.schema_of(1).min == 1.0);
  CHECK(d.schema_of(1).max == 3.0);
  CHECK(d.code_at(0, 2) == d.code_at(0, 0));

  // Mismatched row counts are construction errors.
  CHECK_THROWS_AS(d.add_quantitative_column("w", {1.0}), ValidationError);
}

TEST_CASE("schema info captures frequencies and survives json") {
  Dataset d("t");
  d.add_nominal_column("k", {"b", "a", "b", "b"});
  d.add_quantitative_column("v", {0.5, 1.5, 2.5, 3.5});

  SchemaInfo s = schema_from_dataset(d);
  CHECK(s.table == "t");
  CHECK(s.row_count == 4);
  REQUIRE(s.columns.size() == 2);
  CHECK(s.column("v").max == 3.5);
  REQUIRE(s.frequencies.count("k") == 1);
  CHECK(s.frequencies.at("k")[0] ==
        std::pair<std::string, uint64_t>{"b", 3});

  SchemaInfo s2 = schema_from_json(schema_to_json(s));
  CHECK(s2.table == s.table);
  CHECK(s2.row_count == 4);
  CHECK(s2.column("k").categories == s.column("k").categories);
  CHECK(s2.frequencies.at("k") == s.frequencies.at("k"));
  CHECK_THROWS_AS(s2.column("zzz"), ValidationError);
}

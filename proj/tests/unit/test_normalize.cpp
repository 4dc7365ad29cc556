#include <filesystem>

#include "doctest.h"
#include "idebench/datagen/normalize.hpp"

using namespace idebench;

namespace {

Dataset flights_flat() {
  Dataset d("flights");
  d.add_nominal_column("carrier", {"AA", "DL", "AA", "UA", "DL", "AA"});
  d.add_nominal_column("carrier_name", {"American", "Delta", "American",
                                        "United", "Delta", "American"});
  d.add_nominal_column("origin", {"JFK", "LAX", "JFK", "SFO", "JFK", "LAX"});
  d.add_quantitative_column("dep_delay", {5, -3, 12, 0, 7, -1});
  return d;
}

StarSchemaSpec carrier_spec() {
  StarSchemaSpec spec;
  spec.fact_table = "flights";
  StarSchemaSpec::Dimension dim;
  dim.table = "carriers";
  dim.key = "carrier_id";
  dim.columns = {"carrier", "carrier_name"};
  spec.dimensions.push_back(dim);
  return spec;
}

}  // namespace

TEST_CASE("normalize splits dimensions and join_star reverses it") {
  Dataset flat = flights_flat();
  StarSchemaSpec spec = carrier_spec();
  spec.check(flat.schema());

  StarTables tables = normalize(flat, spec);
  REQUIRE(tables.dimensions.size() == 1);
  const Dataset& carriers = tables.dimensions[0];

  // Three distinct carriers, first-appearance order, dense keys.
  CHECK(carriers.row_count() == 3);
  CHECK(carriers.category_at(carriers.column_index("carrier"), 0) == "AA");
  CHECK(carriers.category_at(carriers.column_index("carrier"), 1) == "DL");
  CHECK(carriers.category_at(carriers.column_index("carrier_name"), 2) ==
        "United");
  CHECK(carriers.has_column("carrier_id"));

  // Fact keeps the remaining columns plus the foreign key.
  CHECK(tables.fact.row_count() == 6);
  CHECK(tables.fact.has_column("carrier_id"));
  CHECK(tables.fact.has_column("origin"));
  CHECK(tables.fact.has_column("dep_delay"));
  CHECK_FALSE(tables.fact.has_column("carrier"));
  CHECK_FALSE(tables.fact.has_column("carrier_name"));

  Dataset joined = join_star(tables, spec);
  CHECK(joined.row_count() == flat.row_count());
  for (const char* col : {"carrier", "carrier_name", "origin", "dep_delay"}) {
    REQUIRE(joined.has_column(col));
    const size_t jc = joined.column_index(col);
    const size_t fc = flat.column_index(col);
    for (size_t r = 0; r < flat.row_count(); ++r)
      CHECK(joined.cell_text(jc, r) == flat.cell_text(fc, r));
  }
}

TEST_CASE("star spec validation catches misuse") {
  Dataset flat = flights_flat();
  StarSchemaSpec spec = carrier_spec();

  StarSchemaSpec unknown = spec;
  unknown.dimensions[0].columns.push_back("no_such_column");
  CHECK_THROWS_AS(unknown.check(flat.schema()), ValidationError);

  StarSchemaSpec overlap = spec;
  StarSchemaSpec::Dimension extra;
  extra.table = "again";
  extra.key = "again_id";
  extra.columns = {"carrier"};  // already claimed
  overlap.dimensions.push_back(extra);
  CHECK_THROWS_AS(overlap.check(flat.schema()), ValidationError);

  StarSchemaSpec collide = spec;
  collide.dimensions[0].key = "origin";  // key shadows a real column
  CHECK_THROWS_AS(collide.check(flat.schema()), ValidationError);
}

TEST_CASE("star spec json round trip") {
  StarSchemaSpec spec = carrier_spec();
  StarSchemaSpec back = star_spec_from_json(star_spec_to_json(spec));
  CHECK(back.fact_table == "flights");
  REQUIRE(back.dimensions.size() == 1);
  CHECK(back.dimensions[0].table == "carriers");
  CHECK(back.dimensions[0].key == "carrier_id");
  CHECK(back.dimensions[0].columns ==
        std::vector<std::string>{"carrier", "carrier_name"});
}

TEST_CASE("star directory io round trip") {
  namespace fs = std::filesystem;
  const std::string dir =
      (fs::temp_directory_path() / "idebench_tests" / "star_dir").string();
  fs::remove_all(dir);

  Dataset flat = flights_flat();
  StarSchemaSpec spec = carrier_spec();
  StarTables tables = normalize(flat, spec);
  save_star_dir(tables, spec, dir);

  CHECK(fs::exists(fs::path(dir) / "star.json"));
  CHECK(fs::exists(fs::path(dir) / "flights.csv"));
  CHECK(fs::exists(fs::path(dir) / "carriers.csv"));

  StarSchemaSpec loaded_spec;
  StarTables loaded = load_star_dir(dir, &loaded_spec);
  CHECK(loaded_spec.fact_table == "flights");
  CHECK(loaded.fact.row_count() == 6);
  REQUIRE(loaded.dimensions.size() == 1);
  CHECK(loaded.dimensions[0].row_count() == 3);

  Dataset joined = join_star(loaded, loaded_spec);
  const size_t jc = joined.column_index("carrier_name");
  CHECK(joined.category_at(jc, 3) == "United");

  CHECK_THROWS_AS(load_star_dir(dir + "_missing", nullptr), IoError);
}

#include "idebench/datagen/seed.hpp"

#include <algorithm>
#include <cmath>

#include "idebench/rng.hpp"

namespace idebench {

Dataset make_demo_seed(uint64_t rows, uint64_t rng_seed,
                       const std::string& table_name) {
  static const char* kCarriers[] = {"AA", "DL", "UA", "WN",
                                    "B6", "AS", "NK", "F9"};
  static const char* kAirports[] = {"ATL", "ORD", "DFW", "DEN", "LAX", "JFK",
                                    "SFO", "SEA", "MIA", "BOS", "PHX", "CLT"};
  Rng rng = Rng::derive(rng_seed, 0x73656564ULL);

  std::vector<std::string> carrier, origin, dest;
  std::vector<double> dep_delay, arr_delay, air_time, distance;
  carrier.reserve(rows);
  origin.reserve(rows);
  dest.reserve(rows);
  for (uint64_t i = 0; i < rows; ++i) {
    // Skewed categorical picks: geometric preference for the head.
    auto pick = [&rng](const char* const* names, size_t n) -> const char* {
      size_t k = 0;
      while (k + 1 < n && rng.uniform() < 0.55) ++k;
      return names[k];
    };
    carrier.emplace_back(pick(kCarriers, 8));
    origin.emplace_back(pick(kAirports, 12));
    dest.emplace_back(pick(kAirports, 12));

    const double dist =
        std::clamp(std::exp(6.2 + 0.55 * rng.normal()), 100.0, 3000.0);
    // Cruise speed varies per flight, so air time correlates with
    // distance without being a pure function of it.
    const double speed = 6.5 + rng.uniform(0.0, 2.5);
    const double air = dist / speed + 15.0 + 4.0 * rng.normal();
    double dep = rng.uniform() < 0.7
                     ? 5.0 * rng.normal()
                     : 10.0 - 30.0 * std::log(1.0 - rng.uniform());
    dep = std::max(dep, -15.0);
    const double arr = dep - 2.0 + 8.0 * rng.normal();
    distance.push_back(std::round(dist));
    air_time.push_back(std::round(air * 10.0) / 10.0);
    dep_delay.push_back(std::round(dep * 10.0) / 10.0);
    arr_delay.push_back(std::round(arr * 10.0) / 10.0);
  }

  Dataset data(table_name);
  data.add_nominal_column("carrier", carrier);
  data.add_nominal_column("origin", origin);
  data.add_nominal_column("dest", dest);
  data.add_quantitative_column("dep_delay", std::move(dep_delay));
  data.add_quantitative_column("arr_delay", std::move(arr_delay));
  data.add_quantitative_column("air_time", std::move(air_time));
  data.add_quantitative_column("distance", std::move(distance));
  return data;
}

}  // namespace idebench

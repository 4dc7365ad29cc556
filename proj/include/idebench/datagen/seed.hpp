#pragma once

#include <cstdint>
#include <string>

#include "idebench/data/dataset.hpp"

namespace idebench {

/// Deterministic flights-style demo table: three skewed nominal
/// columns and four quantitative ones with engineered correlations
/// (arrival tracks departure delay, air time tracks distance). Serves
/// as a seed for the scaler when no real dataset is at hand.
Dataset make_demo_seed(uint64_t rows, uint64_t rng_seed,
                       const std::string& table_name = "flights");

}  // namespace idebench

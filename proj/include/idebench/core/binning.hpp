#pragma once

#include "idebench/core/types.hpp"

namespace idebench {

/// Bin index of a quantitative value under `spec`.
///
/// Fixed-count partitions [min, max] of the column into k equal-width
/// intervals with the last interval closed (so v == max lands in bin
/// k-1). Fixed-width bin i covers [reference + i*w, reference + (i+1)*w)
/// and i may be negative.
int64_t bin_index(double value, const BinningSpec& spec,
                  const ColumnSchema& column);

/// Bin component of any value. Nominal values map to their own
/// category; an unknown category raises UnknownCategoryError.
BinComponent bin_of(double value, const BinningSpec& spec,
                    const ColumnSchema& column);
BinComponent bin_of(const std::string& category, const BinningSpec& spec,
                    const ColumnSchema& column);

}  // namespace idebench

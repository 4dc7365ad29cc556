#include "idebench/core/binning.hpp"

#include <algorithm>
#include <cmath>

namespace idebench {

int64_t bin_index(double value, const BinningSpec& spec,
                  const ColumnSchema& column) {
  spec.check();
  switch (spec.method) {
    case BinningSpec::Method::FixedCount: {
      const double span = column.max - column.min;
      if (span <= 0.0) return 0;  // degenerate single-point domain
      const double k = static_cast<double>(spec.bin_count);
      auto idx =
          static_cast<int64_t>(std::floor(k * (value - column.min) / span));
      return std::clamp<int64_t>(idx, 0, spec.bin_count - 1);
    }
    case BinningSpec::Method::FixedWidth:
      return static_cast<int64_t>(
          std::floor((value - spec.reference) / spec.bin_width));
    case BinningSpec::Method::Distinct:
      throw ValidationError("numeric value offered to distinct binning on '" +
                            spec.column + "'");
  }
  throw ValidationError("unreachable binning method");
}

BinComponent bin_of(double value, const BinningSpec& spec,
                    const ColumnSchema& column) {
  return BinComponent{bin_index(value, spec, column)};
}

BinComponent bin_of(const std::string& category, const BinningSpec& spec,
                    const ColumnSchema& column) {
  if (spec.method != BinningSpec::Method::Distinct)
    throw ValidationError("category offered to quantitative binning on '" +
                          spec.column + "'");
  if (std::find(column.categories.begin(), column.categories.end(),
                category) == column.categories.end())
    throw UnknownCategoryError("category '" + category +
                               "' not in schema of column '" + column.name +
                               "'");
  return BinComponent{category};
}

}  // namespace idebench

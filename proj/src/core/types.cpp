#include "idebench/core/types.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace idebench {

void ColumnSchema::check() const {
  if (name.empty()) throw ValidationError("column with empty name");
  if (kind == ColumnKind::Quantitative) {
    if (!(min <= max))
      throw ValidationError("column '" + name + "': min > max");
  } else {
    if (categories.empty())
      throw ValidationError("nominal column '" + name + "' has no categories");
    std::set<std::string> seen(categories.begin(), categories.end());
    if (seen.size() != categories.size())
      throw ValidationError("nominal column '" + name +
                            "' has duplicate categories");
  }
}

void BinningSpec::check() const {
  switch (method) {
    case Method::Distinct:
      break;
    case Method::FixedCount:
      if (bin_count < 1)
        throw ValidationError("fixed-count binning on '" + column +
                              "' requires k >= 1");
      break;
    case Method::FixedWidth:
      if (!(bin_width > 0.0) || !std::isfinite(bin_width))
        throw ValidationError("fixed-width binning on '" + column +
                              "' requires w > 0");
      break;
  }
}

std::string BinKey::to_string() const {
  std::ostringstream out;
  out << "(";
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out << ",";
    if (std::holds_alternative<int64_t>(parts[i]))
      out << std::get<int64_t>(parts[i]);
    else
      out << std::get<std::string>(parts[i]);
  }
  out << ")";
  return out.str();
}

}  // namespace idebench

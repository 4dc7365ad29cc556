#pragma once

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace idebench {

/// Base class for all errors raised by the framework.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid specs, schemas, or config (caller mistakes).
struct ValidationError : Error {
  using Error::Error;
};

/// Illegal mutation or lookup on the visualization graph.
struct GraphError : Error {
  using Error::Error;
};

/// File and format problems.
struct IoError : Error {
  using Error::Error;
};

/// A value referenced a category that is not part of the column schema.
/// Signals drift between the dataset and the workflow that queries it.
struct UnknownCategoryError : Error {
  using Error::Error;
};

/// Shortest round-trip decimal rendering, locale-free. Integral values
/// come out without a trailing ".0" so SQL and CSV stay readable.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

/// Fixed two-decimal rendering used by the detailed report.
inline std::string format_fixed2(double v) {
  char buf[64];
  int n = snprintf(buf, sizeof(buf), "%.2f", v);
  return std::string(buf, buf + n);
}

}  // namespace idebench

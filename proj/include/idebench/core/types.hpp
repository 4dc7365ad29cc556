#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "idebench/common.hpp"

namespace idebench {

enum class ColumnKind { Nominal, Quantitative };

/// Per-column metadata: domain bounds for quantitative columns,
/// category list for nominal ones.
struct ColumnSchema {
  std::string name;
  ColumnKind kind = ColumnKind::Quantitative;
  double min = 0.0;  // quantitative only
  double max = 0.0;
  std::vector<std::string> categories;  // nominal only

  void check() const;
};

/// How one dimension of a visualization groups its values. Nominal
/// columns always group by distinct category; quantitative columns use
/// either a fixed number of equal-width bins over the observed domain
/// or a fixed bin width anchored at a reference value.
struct BinningSpec {
  enum class Method { Distinct, FixedCount, FixedWidth };

  std::string column;
  Method method = Method::Distinct;
  int64_t bin_count = 0;     // FixedCount
  double bin_width = 0.0;    // FixedWidth
  double reference = 0.0;    // FixedWidth

  void check() const;
};

enum class AggregateFn { Count, Sum, Avg, Min, Max };

struct AggregateSpec {
  AggregateFn fn = AggregateFn::Count;
  std::string column;  // empty for Count
};

enum class CompareOp { Eq, Neq, Lt, Le, Gt, Ge, InRange };

/// One conjunct of a filter. Eq/Neq compare a nominal column against a
/// category; the remaining operators compare a quantitative column
/// against numbers, with InRange covering the half-open [low, high).
struct FilterAtom {
  std::string column;
  CompareOp op = CompareOp::Eq;
  std::string category;  // Eq / Neq
  double number = 0.0;   // Lt / Le / Gt / Ge
  double low = 0.0;      // InRange
  double high = 0.0;
};

struct FilterPredicate {
  std::vector<FilterAtom> atoms;  // conjunction

  bool empty() const { return atoms.empty(); }
  FilterPredicate& append(const FilterPredicate& other) {
    atoms.insert(atoms.end(), other.atoms.begin(), other.atoms.end());
    return *this;
  }
};

/// A visualization request: what to bin by, what to aggregate, which
/// rows it restricts itself to, and (once the user brushes it) the
/// selection it propagates to linked visualizations.
struct VizSpec {
  std::string name;
  std::vector<BinningSpec> binning;  // 1 or 2 dimensions
  AggregateSpec aggregate;
  std::optional<FilterPredicate> own_filter;
  std::optional<FilterPredicate> selection;
};

/// One component of a result bin: a category label or an integer bin
/// index, depending on the dimension's column kind.
using BinComponent = std::variant<int64_t, std::string>;

struct BinKey {
  std::vector<BinComponent> parts;

  BinKey() = default;
  explicit BinKey(BinComponent a) { parts.push_back(std::move(a)); }
  BinKey(BinComponent a, BinComponent b) {
    parts.push_back(std::move(a));
    parts.push_back(std::move(b));
  }

  bool operator==(const BinKey& o) const { return parts == o.parts; }
  bool operator<(const BinKey& o) const { return parts < o.parts; }

  std::string to_string() const;
};

/// Value delivered for one bin. Margin is the half-width of the
/// engine's confidence interval; infinity marks a bin whose margin the
/// engine could not bound (fewer than two sampled rows).
struct BinValue {
  double estimate = 0.0;
  std::optional<double> margin;

  bool margin_unbounded() const {
    return margin && !std::isfinite(*margin);
  }
};

/// A delivered (or ground-truth) aggregate result. Margins are present
/// exactly when the producing engine is approximate or progressive.
struct ResultTable {
  std::map<BinKey, BinValue> bins;
  double progress = 1.0;  // fraction of input consumed, 1 = complete
  std::chrono::system_clock::time_point produced_at{};

  bool has_margins() const {
    return !bins.empty() && bins.begin()->second.margin.has_value();
  }
};

}  // namespace idebench

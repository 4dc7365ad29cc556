#pragma once

// Query execution internals shared by the exact and progressive engines:
// filter compilation, bin index mapping, and per-bin accumulation. Not
// part of the public API.

#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include "idebench/core/types.hpp"
#include "idebench/data/dataset.hpp"

namespace idebench {

/// A filter predicate resolved against a concrete dataset: column
/// pointers instead of names, category codes instead of strings.
class RowPredicate {
 public:
  RowPredicate(const Dataset& data, const FilterPredicate& filter);
  bool matches(size_t row) const;

 private:
  struct CompiledAtom {
    const Dataset::Column* column = nullptr;
    CompareOp op = CompareOp::Eq;
    double number = 0.0, low = 0.0, high = 0.0;
    int32_t code = -1;  // resolved category; -1 when absent from the data
  };
  std::vector<CompiledAtom> atoms_;
};

/// Maps a row to its bin. When every dimension has a bounded index range
/// (fixed-count, nominal distinct, fixed-width over a finite column) the
/// mapper offers a flat composite index so the engines can accumulate
/// into a plain vector; otherwise they fall back to keyed accumulation.
class BinMapper {
 public:
  BinMapper(const Dataset& data, const std::vector<BinningSpec>& dims);

  bool bounded() const { return cardinality_ > 0; }
  int64_t cardinality() const { return cardinality_; }

  /// Flat index in [0, cardinality), or -1 when a grouped cell is null.
  /// Only valid when bounded().
  int64_t flat_index(size_t row) const;
  BinKey key_for(int64_t flat) const;

  /// Any-shape fallback; returns false when a grouped cell is null.
  bool key_of_row(size_t row, BinKey& out) const;

 private:
  struct Dim {
    const Dataset::Column* column = nullptr;
    BinningSpec spec;
    double min = 0.0, span = 0.0;  // column domain, for fixed-count
    int64_t lo = 0;                // lowest occurring fixed-width bin id
    int64_t card = 0;              // 0 means unbounded
  };
  static int64_t dim_index(const Dim& dim, size_t row);  // -1 on null

  const Dataset* data_ = nullptr;
  std::vector<Dim> dims_;
  int64_t cardinality_ = 0;  // 0 means unbounded
};

struct BinAccumulator {
  uint64_t rows = 0;    // matching rows that landed in the bin
  uint64_t values = 0;  // of those, rows with a non-null aggregate input
  double sum = 0.0;
  double sum_squares = 0.0;
  double low = std::numeric_limits<double>::infinity();
  double high = -std::numeric_limits<double>::infinity();
};

struct ScanState {
  std::vector<BinAccumulator> flat;        // used when the mapper is bounded
  std::map<BinKey, BinAccumulator> keyed;  // otherwise
};

/// Accumulates rows [begin, end) of the scan order into `state`.
/// `order` remaps positions (progressive permutation); pass nullptr for
/// natural order. `agg_col` is -1 for COUNT queries.
void scan_rows(const Dataset& data, const RowPredicate& predicate,
               const BinMapper& mapper, ptrdiff_t agg_col,
               const uint32_t* order, size_t begin, size_t end,
               ScanState& state);

/// Final exact values: one bin per accumulator with at least one row
/// (for COUNT) or one non-null input (other aggregates).
ResultTable finish_exact(const ScanState& state, const BinMapper& mapper,
                         AggregateFn fn);

/// Estimates scaled from a uniform sample of `consumed` of `total` rows,
/// with normal-approximation margins at the given confidence. Bins seen
/// fewer than 2 times get an unbounded margin. At full consumption the
/// estimates are the exact values and margins collapse to zero.
ResultTable finish_progressive(const ScanState& state, const BinMapper& mapper,
                               AggregateFn fn, uint64_t consumed,
                               uint64_t total, double confidence);

}  // namespace idebench

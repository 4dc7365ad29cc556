#include "scan.hpp"

#include <algorithm>
#include <cmath>

#include "idebench/rng.hpp"

namespace idebench {

namespace {

constexpr int64_t kFlatLimit = int64_t{1} << 23;  // accumulator vector cap

}  // namespace

RowPredicate::RowPredicate(const Dataset& data, const FilterPredicate& filter) {
  for (const auto& atom : filter.atoms) {
    CompiledAtom compiled;
    const size_t col = data.column_index(atom.column);
    compiled.column = &data.column(col);
    compiled.op = atom.op;
    const bool nominal = compiled.column->kind == ColumnKind::Nominal;
    switch (atom.op) {
      case CompareOp::Eq:
      case CompareOp::Neq: {
        if (!nominal)
          throw ValidationError("equality filter on quantitative column '" +
                                atom.column + "'");
        const auto& dict = compiled.column->dict;
        auto it = std::find(dict.begin(), dict.end(), atom.category);
        compiled.code =
            it == dict.end() ? -1 : static_cast<int32_t>(it - dict.begin());
        break;
      }
      case CompareOp::InRange:
        if (nominal)
          throw ValidationError("range filter on nominal column '" +
                                atom.column + "'");
        compiled.low = atom.low;
        compiled.high = atom.high;
        break;
      default:
        if (nominal)
          throw ValidationError("ordering filter on nominal column '" +
                                atom.column + "'");
        compiled.number = atom.number;
    }
    atoms_.push_back(compiled);
  }
}

bool RowPredicate::matches(size_t row) const {
  for (const auto& atom : atoms_) {
    switch (atom.op) {
      case CompareOp::Eq:
        if (atom.column->codes[row] != atom.code) return false;
        break;
      case CompareOp::Neq:
        if (atom.column->codes[row] == atom.code) return false;
        break;
      case CompareOp::Lt:
        if (!(atom.column->numbers[row] < atom.number)) return false;
        break;
      case CompareOp::Le:
        if (!(atom.column->numbers[row] <= atom.number)) return false;
        break;
      case CompareOp::Gt:
        if (!(atom.column->numbers[row] > atom.number)) return false;
        break;
      case CompareOp::Ge:
        if (!(atom.column->numbers[row] >= atom.number)) return false;
        break;
      case CompareOp::InRange: {
        const double v = atom.column->numbers[row];
        if (!(v >= atom.low && v < atom.high)) return false;
        break;
      }
    }
  }
  return true;
}

BinMapper::BinMapper(const Dataset& data,
                     const std::vector<BinningSpec>& dims)
    : data_(&data) {
  cardinality_ = 1;
  for (const auto& spec : dims) {
    spec.check();
    Dim dim;
    dim.spec = spec;
    const size_t col = data.column_index(spec.column);
    dim.column = &data.column(col);
    const ColumnSchema& schema = data.schema_of(col);
    const bool nominal = dim.column->kind == ColumnKind::Nominal;
    switch (spec.method) {
      case BinningSpec::Method::Distinct:
        if (!nominal)
          throw ValidationError("distinct binning on quantitative column '" +
                                spec.column + "'");
        dim.card = static_cast<int64_t>(dim.column->dict.size());
        if (dim.card == 0) dim.card = 1;  // empty table, single ghost bin
        break;
      case BinningSpec::Method::FixedCount:
        if (nominal)
          throw ValidationError("numeric binning on nominal column '" +
                                spec.column + "'");
        dim.min = schema.min;
        dim.span = schema.max - schema.min;
        dim.card = spec.bin_count;
        break;
      case BinningSpec::Method::FixedWidth: {
        if (nominal)
          throw ValidationError("numeric binning on nominal column '" +
                                spec.column + "'");
        const double lo_d =
            std::floor((schema.min - spec.reference) / spec.bin_width);
        const double hi_d =
            std::floor((schema.max - spec.reference) / spec.bin_width);
        if (hi_d - lo_d < static_cast<double>(kFlatLimit)) {
          dim.lo = static_cast<int64_t>(lo_d);
          dim.card = static_cast<int64_t>(hi_d) - dim.lo + 1;
        }  // else unbounded, keyed accumulation
        break;
      }
    }
    if (dim.card <= 0 || cardinality_ <= 0 ||
        cardinality_ > kFlatLimit / dim.card)
      cardinality_ = 0;
    else
      cardinality_ *= dim.card;
    dims_.push_back(dim);
  }
}

int64_t BinMapper::dim_index(const Dim& dim, size_t row) {
  switch (dim.spec.method) {
    case BinningSpec::Method::Distinct:
      return dim.column->codes[row];
    case BinningSpec::Method::FixedCount: {
      const double v = dim.column->numbers[row];
      if (std::isnan(v)) return -1;
      if (dim.span <= 0.0) return 0;
      const double k = static_cast<double>(dim.spec.bin_count);
      const auto idx =
          static_cast<int64_t>(std::floor(k * (v - dim.min) / dim.span));
      return std::clamp<int64_t>(idx, 0, dim.spec.bin_count - 1);
    }
    case BinningSpec::Method::FixedWidth: {
      const double v = dim.column->numbers[row];
      if (std::isnan(v)) return -1;
      return static_cast<int64_t>(
                 std::floor((v - dim.spec.reference) / dim.spec.bin_width)) -
             dim.lo;
    }
  }
  return -1;
}

int64_t BinMapper::flat_index(size_t row) const {
  int64_t composite = 0;
  for (const auto& dim : dims_) {
    const int64_t idx = dim_index(dim, row);
    if (idx < 0) return -1;
    composite = composite * dim.card + idx;
  }
  return composite;
}

BinKey BinMapper::key_for(int64_t flat) const {
  BinKey key;
  key.parts.resize(dims_.size());
  for (size_t d = dims_.size(); d-- > 0;) {
    const Dim& dim = dims_[d];
    const int64_t idx = flat % dim.card;
    flat /= dim.card;
    switch (dim.spec.method) {
      case BinningSpec::Method::Distinct:
        key.parts[d] = dim.column->dict[static_cast<size_t>(idx)];
        break;
      case BinningSpec::Method::FixedCount:
        key.parts[d] = idx;
        break;
      case BinningSpec::Method::FixedWidth:
        key.parts[d] = dim.lo + idx;
        break;
    }
  }
  return key;
}

bool BinMapper::key_of_row(size_t row, BinKey& out) const {
  out.parts.clear();
  for (const auto& dim : dims_) {
    if (dim.spec.method == BinningSpec::Method::Distinct) {
      out.parts.emplace_back(
          dim.column->dict[static_cast<size_t>(dim.column->codes[row])]);
      continue;
    }
    const double v = dim.column->numbers[row];
    if (std::isnan(v)) return false;
    if (dim.spec.method == BinningSpec::Method::FixedWidth) {
      out.parts.emplace_back(static_cast<int64_t>(
          std::floor((v - dim.spec.reference) / dim.spec.bin_width)));
    } else {
      out.parts.emplace_back(dim_index(dim, row));
    }
  }
  return true;
}

void scan_rows(const Dataset& data, const RowPredicate& predicate,
               const BinMapper& mapper, ptrdiff_t agg_col,
               const uint32_t* order, size_t begin, size_t end,
               ScanState& state) {
  const bool bounded = mapper.bounded();
  if (bounded && state.flat.empty())
    state.flat.resize(static_cast<size_t>(mapper.cardinality()));
  const std::vector<double>* agg =
      agg_col >= 0 ? &data.column(static_cast<size_t>(agg_col)).numbers
                   : nullptr;

  BinKey scratch;
  for (size_t pos = begin; pos < end; ++pos) {
    const size_t row = order ? order[pos] : pos;
    if (!predicate.matches(row)) continue;

    BinAccumulator* acc;
    if (bounded) {
      const int64_t flat = mapper.flat_index(row);
      if (flat < 0) continue;
      acc = &state.flat[static_cast<size_t>(flat)];
    } else {
      if (!mapper.key_of_row(row, scratch)) continue;
      acc = &state.keyed[scratch];
    }
    ++acc->rows;
    if (agg) {
      const double v = (*agg)[row];
      if (!std::isnan(v)) {
        ++acc->values;
        acc->sum += v;
        acc->sum_squares += v * v;
        acc->low = std::min(acc->low, v);
        acc->high = std::max(acc->high, v);
      }
    }
  }
}

namespace {

// Exact value of one finished accumulator, or nullopt when the bin has
// nothing to report (e.g. AVG over all-null inputs).
std::optional<double> exact_value(const BinAccumulator& acc, AggregateFn fn) {
  switch (fn) {
    case AggregateFn::Count:
      return acc.rows ? std::optional<double>(static_cast<double>(acc.rows))
                      : std::nullopt;
    case AggregateFn::Sum:
      return acc.values ? std::optional<double>(acc.sum) : std::nullopt;
    case AggregateFn::Avg:
      return acc.values
                 ? std::optional<double>(acc.sum /
                                         static_cast<double>(acc.values))
                 : std::nullopt;
    case AggregateFn::Min:
      return acc.values ? std::optional<double>(acc.low) : std::nullopt;
    case AggregateFn::Max:
      return acc.values ? std::optional<double>(acc.high) : std::nullopt;
  }
  return std::nullopt;
}

template <typename Emit>
void for_each_bin(const ScanState& state, const BinMapper& mapper,
                  Emit&& emit) {
  if (mapper.bounded()) {
    for (size_t flat = 0; flat < state.flat.size(); ++flat) {
      const BinAccumulator& acc = state.flat[flat];
      if (acc.rows == 0) continue;
      emit(mapper.key_for(static_cast<int64_t>(flat)), acc);
    }
  } else {
    for (const auto& [key, acc] : state.keyed) emit(key, acc);
  }
}

}  // namespace

ResultTable finish_exact(const ScanState& state, const BinMapper& mapper,
                         AggregateFn fn) {
  ResultTable table;
  table.progress = 1.0;
  for_each_bin(state, mapper, [&](const BinKey& key, const BinAccumulator& a) {
    if (auto value = exact_value(a, fn))
      table.bins[key] = BinValue{*value, std::nullopt};
  });
  return table;
}

ResultTable finish_progressive(const ScanState& state, const BinMapper& mapper,
                               AggregateFn fn, uint64_t consumed,
                               uint64_t total, double confidence) {
  ResultTable table;
  table.progress =
      total == 0 ? 1.0
                 : static_cast<double>(consumed) / static_cast<double>(total);
  if (consumed == total) {
    // Full consumption: exact values, zero-width intervals.
    table = finish_exact(state, mapper, fn);
    table.progress = 1.0;
    for (auto& [key, value] : table.bins) value.margin = 0.0;
    return table;
  }

  const double z = z_value(confidence);
  const double n = static_cast<double>(consumed);
  const double population = static_cast<double>(total);
  // Finite population correction: sampling without replacement from a
  // fixed permutation shrinks the error as consumption approaches 100%.
  const double fpc = std::sqrt((population - n) / (population - 1.0));
  constexpr double kUnbounded = std::numeric_limits<double>::infinity();

  for_each_bin(state, mapper, [&](const BinKey& key, const BinAccumulator& a) {
    auto value = exact_value(a, fn);
    if (!value) return;
    BinValue out;
    switch (fn) {
      case AggregateFn::Count: {
        const double p = static_cast<double>(a.rows) / n;
        out.estimate = static_cast<double>(a.rows) * (population / n);
        out.margin = a.rows < 2
                         ? kUnbounded
                         : z * population * std::sqrt(p * (1.0 - p) / n) * fpc;
        break;
      }
      case AggregateFn::Sum: {
        // Per-row contribution over all consumed rows: the bin's values
        // where the row landed here, zero everywhere else.
        const double mean = a.sum / n;
        out.estimate = population * mean;
        const double variance =
            std::max(0.0, a.sum_squares / n - mean * mean);
        out.margin = a.rows < 2 ? kUnbounded
                                : z * population * std::sqrt(variance / n) * fpc;
        break;
      }
      case AggregateFn::Avg: {
        const double m = static_cast<double>(a.values);
        const double mean = a.sum / m;
        out.estimate = mean;
        const double variance =
            std::max(0.0, a.sum_squares / m - mean * mean);
        out.margin = a.values < 2 ? kUnbounded
                                  : z * std::sqrt(variance / m) * fpc;
        break;
      }
      case AggregateFn::Min:
      case AggregateFn::Max:
        // No distribution-free interval for extremes from a sample.
        out.estimate = *value;
        out.margin = kUnbounded;
        break;
    }
    table.bins[key] = out;
  });
  return table;
}

}  // namespace idebench

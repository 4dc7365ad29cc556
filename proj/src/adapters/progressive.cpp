#include "idebench/adapters/progressive.hpp"

#include <algorithm>
#include <numeric>

#include "idebench/rng.hpp"
#include "scan.hpp"

namespace idebench {

namespace {

constexpr size_t kChunkRows = 10000;
constexpr uint64_t kPermutationStream = 0x5a5a5a5aULL;

struct CompiledQuery {
  RowPredicate predicate;
  BinMapper mapper;
  ptrdiff_t agg_col;

  CompiledQuery(const Dataset& data, const QueryRequest& request)
      : predicate(data, request.filter),
        mapper(data, request.viz.binning),
        agg_col(request.viz.aggregate.fn == AggregateFn::Count
                    ? -1
                    : static_cast<ptrdiff_t>(
                          data.column_index(request.viz.aggregate.column))) {}
};

}  // namespace

std::chrono::duration<double> ProgressiveEngine::setup(
    const DatasetSource& source) {
  const auto t0 = std::chrono::steady_clock::now();
  data_ = source.preloaded ? source.preloaded : load_dataset(source.path);
  if (data_->row_count() > UINT32_MAX)
    throw ValidationError("progressive engine caps at 2^32-1 rows");
  permutation_.resize(data_->row_count());
  std::iota(permutation_.begin(), permutation_.end(), uint32_t{0});
  Rng rng = Rng::derive(seed_, kPermutationStream);
  for (size_t i = permutation_.size(); i > 1; --i)
    std::swap(permutation_[i - 1],
              permutation_[static_cast<size_t>(rng.uniform_index(i))]);
  return std::chrono::steady_clock::now() - t0;
}

QueryOutcome ProgressiveEngine::process_request(const QueryRequest& request) {
  if (!data_) return QueryOutcome::failed("process_request before setup");
  try {
    CompiledQuery query(*data_, request);
    const size_t n = permutation_.size();

    // Stop consuming early enough to still materialize the snapshot
    // before the deadline. A slice of the remaining budget (checked at
    // entry) covers the bin walk; the driver's grace window covers slop.
    const auto now = std::chrono::steady_clock::now();
    auto reserve = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        (request.deadline - now) / 50);
    reserve = std::max(reserve,
                       std::chrono::steady_clock::duration(
                           std::chrono::milliseconds(2)));
    const auto cutoff = request.deadline - reserve;

    ScanState state;
    size_t consumed = 0;
    while (consumed < n) {
      if (std::chrono::steady_clock::now() >= cutoff) break;
      const size_t end = std::min(n, consumed + kChunkRows);
      scan_rows(*data_, query.predicate, query.mapper, query.agg_col,
                permutation_.data(), consumed, end, state);
      consumed = end;
    }
    return QueryOutcome::ok(finish_progressive(
        state, query.mapper, request.viz.aggregate.fn, consumed, n,
        request.confidence));
  } catch (const Error& e) {
    return QueryOutcome::failed(e.what());
  }
}

ResultTable ProgressiveEngine::snapshot(const QueryRequest& request,
                                        uint64_t rows_consumed) const {
  if (!data_) throw ValidationError("snapshot before setup");
  CompiledQuery query(*data_, request);
  const uint64_t n =
      std::min<uint64_t>(rows_consumed, permutation_.size());
  ScanState state;
  scan_rows(*data_, query.predicate, query.mapper, query.agg_col,
            permutation_.data(), 0, static_cast<size_t>(n), state);
  return finish_progressive(state, query.mapper, request.viz.aggregate.fn, n,
                            permutation_.size(), request.confidence);
}

}  // namespace idebench

#include "idebench/adapters/exact.hpp"

#include "scan.hpp"

namespace idebench {

namespace {

constexpr size_t kDeadlineCheckRows = 10000;

}  // namespace

std::chrono::duration<double> ExactEngine::setup(const DatasetSource& source) {
  const auto t0 = std::chrono::steady_clock::now();
  data_ = source.preloaded ? source.preloaded : load_dataset(source.path);
  return std::chrono::steady_clock::now() - t0;
}

QueryOutcome ExactEngine::process_request(const QueryRequest& request) {
  if (!data_) return QueryOutcome::failed("process_request before setup");
  try {
    RowPredicate predicate(*data_, request.filter);
    BinMapper mapper(*data_, request.viz.binning);
    const ptrdiff_t agg_col =
        request.viz.aggregate.fn == AggregateFn::Count
            ? -1
            : static_cast<ptrdiff_t>(
                  data_->column_index(request.viz.aggregate.column));

    ScanState state;
    const size_t n = data_->row_count();
    for (size_t begin = 0; begin < n; begin += kDeadlineCheckRows) {
      if (std::chrono::steady_clock::now() >= request.deadline)
        return QueryOutcome::timeout();  // no partial results from this engine
      scan_rows(*data_, predicate, mapper, agg_col, nullptr, begin,
                std::min(n, begin + kDeadlineCheckRows), state);
    }
    if (std::chrono::steady_clock::now() >= request.deadline)
      return QueryOutcome::timeout();
    return QueryOutcome::ok(finish_exact(state, mapper, request.viz.aggregate.fn));
  } catch (const Error& e) {
    return QueryOutcome::failed(e.what());
  }
}

ResultTable ExactEngine::execute(const QueryRequest& request) const {
  if (!data_) throw ValidationError("execute before setup");
  RowPredicate predicate(*data_, request.filter);
  BinMapper mapper(*data_, request.viz.binning);
  const ptrdiff_t agg_col =
      request.viz.aggregate.fn == AggregateFn::Count
          ? -1
          : static_cast<ptrdiff_t>(
                data_->column_index(request.viz.aggregate.column));
  ScanState state;
  scan_rows(*data_, predicate, mapper, agg_col, nullptr, 0, data_->row_count(),
            state);
  return finish_exact(state, mapper, request.viz.aggregate.fn);
}

}  // namespace idebench

#pragma once

#include "idebench/adapters/adapter.hpp"
#include "idebench/data/dataset.hpp"

namespace idebench {

/// Blocking reference engine: full scans, exact answers, nothing partial.
/// A query that cannot finish before its deadline is abandoned and
/// reported as a timeout.
class ExactEngine : public Adapter {
 public:
  std::chrono::duration<double> setup(const DatasetSource& source) override;
  QueryOutcome process_request(const QueryRequest& request) override;

  /// Runs to completion with no deadline. This is also the ground-truth
  /// path the driver compares every delivered result against.
  ResultTable execute(const QueryRequest& request) const;

  AdapterCapabilities capabilities() const override {
    return {.supports_progressive_poll = false,
            .supports_margins = false,
            .supports_joins = true,
            .supports_cancellation = true};
  }
  std::string name() const override { return "exact"; }

  const Dataset& data() const { return *data_; }

 private:
  std::shared_ptr<const Dataset> data_;
};

}  // namespace idebench

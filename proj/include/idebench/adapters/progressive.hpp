#pragma once

#include <cstdint>
#include <vector>

#include "idebench/adapters/adapter.hpp"
#include "idebench/data/dataset.hpp"

namespace idebench {

/// Sampling reference engine. Setup shuffles the row indices once with
/// a seeded RNG; every query then consumes that fixed permutation from
/// the front until its deadline and answers with scaled estimates plus
/// confidence margins.
class ProgressiveEngine : public Adapter {
 public:
  explicit ProgressiveEngine(uint64_t permutation_seed = 0)
      : seed_(permutation_seed) {}

  std::chrono::duration<double> setup(const DatasetSource& source) override;
  QueryOutcome process_request(const QueryRequest& request) override;

  /// Deterministic snapshot after exactly `rows_consumed` permuted rows,
  /// no clock involved. The calibration tests drive this directly.
  ResultTable snapshot(const QueryRequest& request,
                       uint64_t rows_consumed) const;

  AdapterCapabilities capabilities() const override {
    return {.supports_progressive_poll = true,
            .supports_margins = true,
            .supports_joins = true,
            .supports_cancellation = true};
  }
  std::string name() const override { return "progressive"; }

  const Dataset& data() const { return *data_; }

 private:
  uint64_t seed_;
  std::shared_ptr<const Dataset> data_;
  std::vector<uint32_t> permutation_;
};

}  // namespace idebench

#pragma once

#include <cstdint>
#include <optional>

#include "idebench/core/types.hpp"

namespace idebench {

/// Quality of one delivered result against its ground truth. Optional
/// fields are genuinely undefined in some situations (empty truth, no
/// margins, zero denominators) and stay unset rather than carrying a
/// sentinel value.
struct MetricSet {
  bool tr_violated = false;

  std::optional<double> missing_bins;
  std::optional<double> mre_mean;
  std::optional<double> mre_stdev;
  size_t mre_excluded_zero_truth = 0;
  std::optional<double> smape;
  double cosine_distance = 0.0;
  std::optional<double> margin_mean;
  std::optional<double> margin_stdev;
  size_t margin_excluded = 0;
  std::optional<uint64_t> out_of_margin;
  std::optional<double> bias;

  size_t bins_delivered = 0;
  size_t bins_in_truth = 0;
  size_t spurious_bins = 0;  // delivered keys absent from the truth
};

/// Fraction of truth bins absent from the delivered table. Spurious
/// delivered bins do not offset it. Undefined when the truth is empty
/// but something was delivered anyway.
std::optional<double> missing_bins(const ResultTable& delivered,
                                   const ResultTable& truth);

struct MreResult {
  std::optional<double> mean;
  std::optional<double> stdev;  // population
  size_t excluded_zero_truth = 0;
};

/// Mean |F-A|/|A| over bins present in both tables; zero-truth bins are
/// excluded and counted since the ratio is undefined there.
MreResult mean_relative_error(const ResultTable& delivered,
                              const ResultTable& truth);

/// Mean |F-A|/(|F|+|A|) over the same intersection; a 0/0 bin counts as
/// zero error. Always lands in [0,1]. Unset when the intersection is empty.
std::optional<double> smape(const ResultTable& delivered,
                            const ResultTable& truth);

/// 1 - cosine similarity over the union of keys, zero-filling either
/// side. Both vectors all-zero gives 0; exactly one all-zero gives 1.
double cosine_distance(const ResultTable& delivered, const ResultTable& truth);

struct MarginStats {
  std::optional<double> mean;
  std::optional<double> stdev;  // population
  size_t excluded = 0;          // zero estimates and unbounded margins
};

/// Mean and stdev of margin/|estimate| over delivered bins.
MarginStats margin_stats(const ResultTable& delivered);

/// How many intersection bins missed the truth by more than their own
/// margin. Unset when the table carries no margins.
std::optional<uint64_t> out_of_margin(const ResultTable& delivered,
                                      const ResultTable& truth);

/// Sum of delivered values over sum of true values, intersection scope.
/// Unset when the truth sums to zero there.
std::optional<double> bias(const ResultTable& delivered,
                           const ResultTable& truth);

/// Every metric at once, plus the bin counts the detailed report needs.
/// tr_violated is left false; the driver owns that flag.
MetricSet compute_all(const ResultTable& delivered, const ResultTable& truth);

}  // namespace idebench

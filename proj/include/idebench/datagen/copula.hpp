#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "idebench/core/types.hpp"
#include "idebench/data/dataset.hpp"
#include "idebench/datagen/matrix.hpp"
#include "idebench/rng.hpp"

namespace idebench {

/// Rows drawn from the seed dataset for model fitting, column major.
/// Quantitative columns store the raw values; nominal columns store
/// ordinal codes where 0 is the most frequent category in the sample.
struct SeedSample {
  std::vector<ColumnSchema> schema;
  std::vector<std::vector<double>> values;
  /// Nominal columns only: ordinal code -> category, descending frequency
  /// (ties broken by name). Empty for quantitative columns.
  std::vector<std::vector<std::string>> categories;

  size_t rows() const { return values.empty() ? 0 : values[0].size(); }
};

/// Fitted Gaussian copula: a correlation matrix over rank-based normal
/// scores plus one empirical marginal per column. Synthesis draws
/// correlated normals, pushes them through the normal CDF, and inverts
/// each marginal.
struct CopulaModel {
  struct Marginal {
    ColumnKind kind = ColumnKind::Quantitative;
    std::vector<double> sorted_values;    // quantitative: order statistics
    std::vector<std::string> categories;  // nominal: rank order
    std::vector<double> cumulative;       // nominal: cumulative frequency
  };

  std::vector<ColumnSchema> schema;
  std::vector<Marginal> marginals;

  /// Columns participating in the correlation structure, as indices into
  /// `schema`. Constant columns are left out and synthesized independently.
  std::vector<size_t> correlated;
  std::vector<std::string> dropped_constant;

  SquareMatrix correlation;  // unit diagonal, positive definite
  SquareMatrix factor;       // lower triangular, factor * factor' == correlation
  double jitter = 0.0;       // regularization actually applied, 0 if none
  size_t sample_rows = 0;
};

/// Draws the fitting sample: rows with a null in any quantitative column
/// are skipped, then `sample_size` of the survivors are picked without
/// replacement (all of them when fewer). Needs at least 100 usable rows.
SeedSample draw_seed_sample(const Dataset& seed, size_t sample_size, Rng& rng);

/// Per-column normal scores of the sample: average ranks mapped through
/// the standard normal quantile. Ties (nominal codes) share a rank.
std::vector<std::vector<double>> normal_scores(const SeedSample& sample);

CopulaModel fit(const Dataset& seed, size_t sample_size, uint64_t rng_seed);

/// Rows per synthesis partition. Each partition draws from its own
/// derived RNG stream, so output is identical no matter how partitions
/// are scheduled.
inline constexpr size_t kSynthesisPartitionRows = 65536;

Dataset synthesize(const CopulaModel& model, size_t n, uint64_t rng_seed);

/// Inverse empirical CDF helpers, exposed for direct testing.
double quantitative_quantile(const std::vector<double>& sorted_values,
                             double u);
size_t nominal_quantile(const std::vector<double>& cumulative, double u);

}  // namespace idebench

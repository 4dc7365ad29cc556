#include "idebench/datagen/copula.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace idebench {

namespace {

constexpr uint64_t kFitStream = ~uint64_t{0};

// Indices of rows usable for fitting: every quantitative cell non-null.
std::vector<size_t> usable_rows(const Dataset& seed) {
  std::vector<size_t> rows;
  rows.reserve(seed.row_count());
  for (size_t r = 0; r < seed.row_count(); ++r) {
    bool ok = true;
    for (size_t c = 0; c < seed.column_count() && ok; ++c) {
      if (seed.schema_of(c).kind == ColumnKind::Quantitative &&
          std::isnan(seed.number_at(c, r)))
        ok = false;
    }
    if (ok) rows.push_back(r);
  }
  return rows;
}

}  // namespace

SeedSample draw_seed_sample(const Dataset& seed, size_t sample_size,
                            Rng& rng) {
  if (seed.column_count() == 0)
    throw ValidationError("seed dataset has no columns");
  for (size_t c = 0; c < seed.column_count(); ++c) {
    const auto& col = seed.column(c);
    if (col.kind == ColumnKind::Quantitative &&
        std::all_of(col.numbers.begin(), col.numbers.end(),
                    [](double v) { return std::isnan(v); }))
      throw ValidationError("column '" + seed.column_name(c) +
                            "' is entirely null");
  }

  std::vector<size_t> pool = usable_rows(seed);
  if (pool.size() < 100)
    throw ValidationError("need at least 100 rows without nulls to fit, got " +
                          std::to_string(pool.size()));

  std::vector<size_t> chosen;
  if (sample_size >= pool.size()) {
    chosen = std::move(pool);
  } else {
    // Partial Fisher-Yates: the first sample_size slots end up holding a
    // uniform draw without replacement.
    for (size_t i = 0; i < sample_size; ++i) {
      size_t j = i + static_cast<size_t>(rng.uniform_index(pool.size() - i));
      std::swap(pool[i], pool[j]);
    }
    chosen.assign(pool.begin(), pool.begin() + sample_size);
  }

  SeedSample sample;
  sample.schema = seed.schema();
  sample.values.resize(seed.column_count());
  sample.categories.resize(seed.column_count());

  for (size_t c = 0; c < seed.column_count(); ++c) {
    auto& out = sample.values[c];
    out.reserve(chosen.size());
    if (seed.schema_of(c).kind == ColumnKind::Quantitative) {
      for (size_t r : chosen) out.push_back(seed.number_at(c, r));
      continue;
    }
    // Ordinal-encode by descending frequency within the sample.
    std::map<int32_t, uint64_t> counts;
    for (size_t r : chosen) ++counts[seed.code_at(c, r)];
    std::vector<std::pair<int32_t, uint64_t>> order(counts.begin(),
                                                    counts.end());
    const auto& dict = seed.column(c).dict;
    std::sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return dict[a.first] < dict[b.first];
    });
    std::map<int32_t, double> rank_of;
    auto& cats = sample.categories[c];
    for (size_t rank = 0; rank < order.size(); ++rank) {
      rank_of[order[rank].first] = static_cast<double>(rank);
      cats.push_back(dict[order[rank].first]);
    }
    for (size_t r : chosen) out.push_back(rank_of[seed.code_at(c, r)]);
  }
  return sample;
}

std::vector<std::vector<double>> normal_scores(const SeedSample& sample) {
  const size_t n = sample.rows();
  std::vector<std::vector<double>> scores(sample.values.size());
  std::vector<size_t> order(n);
  for (size_t c = 0; c < sample.values.size(); ++c) {
    const auto& v = sample.values[c];
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return v[a] < v[b]; });
    auto& s = scores[c];
    s.assign(n, 0.0);
    // Average rank across each tie run, then map rank/(n+1) to a normal
    // quantile. Keeps nominal codes (mass ties) centered.
    size_t i = 0;
    while (i < n) {
      size_t j = i;
      while (j < n && v[order[j]] == v[order[i]]) ++j;
      const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // 1-based
      const double q =
          normal_quantile(avg_rank / static_cast<double>(n + 1));
      for (size_t k = i; k < j; ++k) s[order[k]] = q;
      i = j;
    }
  }
  return scores;
}

namespace {

// Pearson correlation matrix of the given score columns.
SquareMatrix score_correlation(const std::vector<std::vector<double>>& scores,
                               const std::vector<size_t>& columns) {
  const size_t d = columns.size();
  const size_t n = scores[columns[0]].size();
  std::vector<double> mean(d, 0.0), sd(d, 0.0);
  for (size_t a = 0; a < d; ++a) {
    const auto& s = scores[columns[a]];
    mean[a] = std::accumulate(s.begin(), s.end(), 0.0) / double(n);
    double ss = 0.0;
    for (double x : s) ss += (x - mean[a]) * (x - mean[a]);
    sd[a] = std::sqrt(ss / double(n));
  }
  SquareMatrix r(d);
  for (size_t a = 0; a < d; ++a) {
    r.at(a, a) = 1.0;
    for (size_t b = a + 1; b < d; ++b) {
      const auto& sa = scores[columns[a]];
      const auto& sb = scores[columns[b]];
      double cov = 0.0;
      for (size_t i = 0; i < n; ++i)
        cov += (sa[i] - mean[a]) * (sb[i] - mean[b]);
      cov /= double(n);
      double rho = cov / (sd[a] * sd[b]);
      rho = std::clamp(rho, -1.0, 1.0);
      r.at(a, b) = r.at(b, a) = rho;
    }
  }
  return r;
}

}  // namespace

CopulaModel fit(const Dataset& seed, size_t sample_size, uint64_t rng_seed) {
  Rng rng = Rng::derive(rng_seed, kFitStream);
  SeedSample sample = draw_seed_sample(seed, sample_size, rng);
  const size_t n = sample.rows();

  CopulaModel model;
  model.schema = sample.schema;
  model.sample_rows = n;
  model.marginals.resize(sample.values.size());

  for (size_t c = 0; c < sample.values.size(); ++c) {
    auto& marginal = model.marginals[c];
    marginal.kind = sample.schema[c].kind;
    if (marginal.kind == ColumnKind::Quantitative) {
      marginal.sorted_values = sample.values[c];
      std::sort(marginal.sorted_values.begin(), marginal.sorted_values.end());
    } else {
      marginal.categories = sample.categories[c];
      std::vector<uint64_t> counts(marginal.categories.size(), 0);
      for (double code : sample.values[c])
        ++counts[static_cast<size_t>(code)];
      marginal.cumulative.resize(counts.size());
      double running = 0.0;
      for (size_t k = 0; k < counts.size(); ++k) {
        running += static_cast<double>(counts[k]) / static_cast<double>(n);
        marginal.cumulative[k] = running;
      }
      marginal.cumulative.back() = 1.0;  // guard against rounding drift
    }
    const auto& v = sample.values[c];
    const bool constant =
        std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; });
    if (constant)
      model.dropped_constant.push_back(sample.schema[c].name);
    else
      model.correlated.push_back(c);
  }

  if (model.correlated.empty()) {
    model.correlation = SquareMatrix(0);
    model.factor = SquareMatrix(0);
    return model;
  }

  std::vector<std::vector<double>> scores = normal_scores(sample);
  model.correlation = score_correlation(scores, model.correlated);

  try {
    model.factor = cholesky(model.correlation);
    return model;
  } catch (const NotPositiveDefiniteError&) {
  }
  // Jitter toward the identity until the factorization goes through:
  // blending (R + eps*I) / (1 + eps) keeps the diagonal at exactly 1 and
  // lifts every eigenvalue by at least eps / (1 + eps).
  const size_t d = model.correlated.size();
  double eps = 1e-10;
  while (true) {
    SquareMatrix regularized(d);
    for (size_t i = 0; i < d; ++i)
      for (size_t j = 0; j < d; ++j)
        regularized.at(i, j) =
            (model.correlation.at(i, j) + (i == j ? eps : 0.0)) / (1.0 + eps);
    try {
      model.factor = cholesky(regularized);
      model.correlation = regularized;
      model.jitter = eps;
      return model;
    } catch (const NotPositiveDefiniteError&) {
      if (eps >= 1e-4) throw;
      eps = std::min(eps * 2.0, 1e-4);
    }
  }
}

double quantitative_quantile(const std::vector<double>& sorted_values,
                             double u) {
  const size_t m = sorted_values.size();
  if (m == 1) return sorted_values[0];
  const double pos = u * static_cast<double>(m - 1);
  size_t i = static_cast<size_t>(pos);
  if (i >= m - 1) return sorted_values[m - 1];
  const double frac = pos - static_cast<double>(i);
  return sorted_values[i] + frac * (sorted_values[i + 1] - sorted_values[i]);
}

size_t nominal_quantile(const std::vector<double>& cumulative, double u) {
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end()) return cumulative.size() - 1;
  return static_cast<size_t>(it - cumulative.begin());
}

Dataset synthesize(const CopulaModel& model, size_t n, uint64_t rng_seed) {
  const size_t d = model.schema.size();
  if (d == 0) throw ValidationError("cannot synthesize from an empty model");

  // Position of each schema column inside the correlated vector, or -1.
  std::vector<ptrdiff_t> slot(d, -1);
  for (size_t k = 0; k < model.correlated.size(); ++k)
    slot[model.correlated[k]] = static_cast<ptrdiff_t>(k);

  std::vector<std::vector<double>> numbers(d);
  std::vector<std::vector<int32_t>> codes(d);
  for (size_t c = 0; c < d; ++c) {
    if (model.schema[c].kind == ColumnKind::Quantitative)
      numbers[c].reserve(n);
    else
      codes[c].reserve(n);
  }

  auto emit = [&](size_t c, double u) {
    const auto& marginal = model.marginals[c];
    if (marginal.kind == ColumnKind::Quantitative)
      numbers[c].push_back(quantitative_quantile(marginal.sorted_values, u));
    else
      codes[c].push_back(
          static_cast<int32_t>(nominal_quantile(marginal.cumulative, u)));
  };

  const size_t dc = model.correlated.size();
  std::vector<double> x(dc), u_independent(d), correlated_normals;
  const size_t partitions =
      (n + kSynthesisPartitionRows - 1) / kSynthesisPartitionRows;
  for (size_t p = 0; p < partitions; ++p) {
    Rng rng = Rng::derive(rng_seed, p);
    const size_t begin = p * kSynthesisPartitionRows;
    const size_t end = std::min(n, begin + kSynthesisPartitionRows);
    for (size_t row = begin; row < end; ++row) {
      // One normal draw per column, in schema order, whether or not the
      // column sits in the correlation structure. Keeps the draw count
      // per row fixed so streams stay aligned.
      for (size_t c = 0; c < d; ++c) {
        const double z = rng.normal();
        if (slot[c] >= 0)
          x[static_cast<size_t>(slot[c])] = z;
        else
          u_independent[c] = normal_cdf(z);
      }
      if (dc > 0)
        correlated_normals = lower_triangular_apply(model.factor, x);
      for (size_t c = 0; c < d; ++c) {
        if (slot[c] >= 0)
          emit(c, normal_cdf(
                      correlated_normals[static_cast<size_t>(slot[c])]));
        else
          emit(c, u_independent[c]);
      }
    }
  }

  Dataset out("synthetic");
  for (size_t c = 0; c < d; ++c) {
    if (model.schema[c].kind == ColumnKind::Quantitative)
      out.add_quantitative_column(model.schema[c].name, std::move(numbers[c]));
    else
      out.add_nominal_column_encoded(model.schema[c].name, std::move(codes[c]),
                                     model.marginals[c].categories);
  }
  return out;
}

}  // namespace idebench

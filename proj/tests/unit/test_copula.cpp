#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "doctest.h"
#include "idebench/datagen/copula.hpp"

using namespace idebench;

namespace {

// Seed with a strong positive x-y correlation and a frequency-skewed
// nominal column, all driven by one Rng so the test is reproducible.
Dataset correlated_seed(size_t rows, uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x, y;
  std::vector<std::string> k;
  const char* cats[] = {"alpha", "beta", "gamma"};
  for (size_t i = 0; i < rows; ++i) {
    const double base = rng.normal();
    x.push_back(10.0 + 3.0 * base);
    y.push_back(-5.0 + 2.0 * base + 0.5 * rng.normal());
    const double u = rng.uniform();
    k.push_back(cats[u < 0.6 ? 0 : (u < 0.9 ? 1 : 2)]);
  }
  Dataset d("seed");
  d.add_quantitative_column("x", std::move(x));
  d.add_quantitative_column("y", std::move(y));
  d.add_nominal_column("k", k);
  return d;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const size_t n = a.size();
  double ma = std::accumulate(a.begin(), a.end(), 0.0) / double(n);
  double mb = std::accumulate(b.begin(), b.end(), 0.0) / double(n);
  double cov = 0, va = 0, vb = 0;
  for (size_t i = 0; i < n; ++i) {
    cov += (a[i] - ma) * (b[i] - mb);
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
  }
  return cov / std::sqrt(va * vb);
}

}  // namespace

// Expected scores frozen from scipy.stats.norm.ppf of the average
// 1-based ranks over n+1.
TEST_CASE("normal scores average tied ranks") {
  SeedSample sample;
  ColumnSchema c;
  c.name = "v";
  sample.schema = {c};
  sample.values = {{3.0, 1.0, 4.0, 1.0, 5.0}};
  sample.categories.resize(1);

  auto scores = normal_scores(sample);
  REQUIRE(scores.size() == 1);
  REQUIRE(scores[0].size() == 5);
  CHECK(scores[0][0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(scores[0][1] == doctest::Approx(-0.6744897501960817).epsilon(1e-12));
  CHECK(scores[0][2] == doctest::Approx(0.43072729929545744).epsilon(1e-12));
  CHECK(scores[0][3] == scores[0][1]);  // tie run shares one score
  CHECK(scores[0][4] == doctest::Approx(0.967421566101701).epsilon(1e-12));
}

TEST_CASE("inverse empirical quantiles") {
  std::vector<double> sorted{10.0, 20.0, 40.0};
  CHECK(quantitative_quantile(sorted, 0.0) == 10.0);
  CHECK(quantitative_quantile(sorted, 0.25) == 15.0);  // interpolated
  CHECK(quantitative_quantile(sorted, 0.5) == 20.0);
  CHECK(quantitative_quantile(sorted, 0.75) == 30.0);
  CHECK(quantitative_quantile(sorted, 1.0) == 40.0);
  CHECK(quantitative_quantile({7.5}, 0.3) == 7.5);

  std::vector<double> cumulative{0.5, 0.8, 1.0};
  CHECK(nominal_quantile(cumulative, 0.0) == 0);
  CHECK(nominal_quantile(cumulative, 0.3) == 0);
  CHECK(nominal_quantile(cumulative, 0.5) == 1);   // boundary goes right
  CHECK(nominal_quantile(cumulative, 0.79) == 1);
  CHECK(nominal_quantile(cumulative, 0.8) == 2);
  CHECK(nominal_quantile(cumulative, 0.999) == 2);
  CHECK(nominal_quantile(cumulative, 1.0) == 2);
}

TEST_CASE("fit captures the correlation structure of the seed") {
  Dataset seed = correlated_seed(2000, 11);
  CopulaModel model = fit(seed, 2000, 5);

  CHECK(model.sample_rows == 2000);
  CHECK(model.dropped_constant.empty());
  CHECK(model.correlated == std::vector<size_t>{0, 1, 2});
  REQUIRE(model.correlation.size() == 3);
  CHECK(model.correlation.at(0, 0) == 1.0);
  CHECK(model.correlation.at(0, 1) == model.correlation.at(1, 0));
  // x and y share a latent factor with ~0.97 true correlation; the
  // rank-based estimate lands close.
  CHECK(model.correlation.at(0, 1) > 0.9);

  // The factor reproduces the correlation matrix.
  SquareMatrix recon(3);
  for (size_t r = 0; r < 3; ++r)
    for (size_t c = 0; c < 3; ++c) {
      double s = 0;
      for (size_t k = 0; k < 3; ++k)
        s += model.factor.at(r, k) * model.factor.at(c, k);
      recon.at(r, c) = s;
    }
  CHECK(max_abs_difference(recon, model.correlation) < 1e-8);

  // Marginals: order statistics sorted, nominal ranked by frequency.
  REQUIRE(model.marginals.size() == 3);
  CHECK(std::is_sorted(model.marginals[0].sorted_values.begin(),
                       model.marginals[0].sorted_values.end()));
  CHECK(model.marginals[2].categories[0] == "alpha");  // most frequent
  CHECK(model.marginals[2].cumulative.back() == 1.0);
}

TEST_CASE("synthesis preserves marginals and correlation at small scale") {
  Dataset seed = correlated_seed(3000, 21);
  CopulaModel model = fit(seed, 3000, 9);
  Dataset synth = synthesize(model, 20000, 9);

  CHECK(synth.row_count() == 20000);
  REQUIRE(synth.column_count() == 3);

  // Quantitative values never leave the seed's observed range.
  const auto& sx = seed.schema_of(0);
  CHECK(synth.schema_of(0).min >= sx.min);
  CHECK(synth.schema_of(0).max <= sx.max);

  // Correlation carried through the copula.
  CHECK(pearson(synth.column(0).numbers, synth.column(1).numbers) > 0.85);

  // Nominal frequencies near the seed's.
  auto seed_counts = seed.category_counts(2);
  auto synth_counts = synth.category_counts(2);
  REQUIRE(synth_counts.size() == seed_counts.size());
  for (size_t i = 0; i < seed_counts.size(); ++i) {
    CHECK(synth_counts[i].first == seed_counts[i].first);
    const double seed_frac = double(seed_counts[i].second) / 3000.0;
    const double synth_frac = double(synth_counts[i].second) / 20000.0;
    CHECK(std::fabs(seed_frac - synth_frac) < 0.02);
  }

  // Quantitative quartiles track the seed (a cheap two-sided KS probe).
  auto quartiles = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return std::array<double, 3>{v[v.size() / 4], v[v.size() / 2],
                                 v[3 * v.size() / 4]};
  };
  auto qs = quartiles(seed.column(1).numbers);
  auto qt = quartiles(synth.column(1).numbers);
  const double spread = seed.schema_of(1).max - seed.schema_of(1).min;
  for (size_t i = 0; i < 3; ++i)
    CHECK(std::fabs(qs[i] - qt[i]) < 0.05 * spread);
}

TEST_CASE("constant columns drop out of the correlation structure") {
  Rng rng(3);
  Dataset seed("seed");
  std::vector<double> varying, constant;
  for (int i = 0; i < 500; ++i) {
    varying.push_back(rng.uniform(0.0, 100.0));
    constant.push_back(42.0);
  }
  seed.add_quantitative_column("v", std::move(varying));
  seed.add_quantitative_column("c", std::move(constant));

  CopulaModel model = fit(seed, 500, 1);
  CHECK(model.dropped_constant == std::vector<std::string>{"c"});
  CHECK(model.correlated == std::vector<size_t>{0});
  CHECK(model.correlation.size() == 1);

  Dataset synth = synthesize(model, 1000, 2);
  for (double v : synth.column(1).numbers) CHECK(v == 42.0);
}

TEST_CASE("fitting rejects unusable seeds") {
  Dataset tiny("t");
  {
    std::vector<double> v(50, 1.0);
    tiny.add_quantitative_column("v", std::move(v));
  }
  CHECK_THROWS_AS(fit(tiny, 50, 1), ValidationError);

  Dataset nulls("t");
  {
    std::vector<double> ok, all_null;
    for (int i = 0; i < 200; ++i) {
      ok.push_back(double(i));
      all_null.push_back(std::nan(""));
    }
    nulls.add_quantitative_column("ok", std::move(ok));
    nulls.add_quantitative_column("bad", std::move(all_null));
  }
  CHECK_THROWS_AS(fit(nulls, 200, 1), ValidationError);
}

TEST_CASE("rows with nulls are skipped for fitting but others survive") {
  Rng rng(8);
  Dataset seed("t");
  std::vector<double> a, b;
  for (int i = 0; i < 300; ++i) {
    a.push_back(i % 7 == 0 ? std::nan("") : rng.uniform(0.0, 1.0));
    b.push_back(rng.uniform(0.0, 1.0));
  }
  seed.add_quantitative_column("a", std::move(a));
  seed.add_quantitative_column("b", std::move(b));
  CopulaModel model = fit(seed, 10000, 4);
  CHECK(model.sample_rows == 300 - 43);  // 43 multiples of 7 in [0, 300)
}

TEST_CASE("synthesis is deterministic and prefix-stable") {
  Dataset seed = correlated_seed(500, 31);
  CopulaModel model = fit(seed, 500, 17);

  Dataset a = synthesize(model, 3000, 99);
  Dataset b = synthesize(model, 3000, 99);
  Dataset prefix = synthesize(model, 1000, 99);
  Dataset other = synthesize(model, 3000, 100);

  bool identical = true, prefix_ok = true, differs = false;
  for (size_t r = 0; r < 3000; ++r)
    for (size_t c = 0; c < 3; ++c) {
      if (a.cell_text(c, r) != b.cell_text(c, r)) identical = false;
      if (r < 1000 && a.cell_text(c, r) != prefix.cell_text(c, r))
        prefix_ok = false;
      if (a.cell_text(c, r) != other.cell_text(c, r)) differs = true;
    }
  CHECK(identical);
  CHECK(prefix_ok);
  CHECK(differs);
}

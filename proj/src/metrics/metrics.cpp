#include "idebench/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace idebench {

namespace {

// Mean and population stdev of a value list.
std::pair<double, double> mean_stdev(const std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size()))};
}

}  // namespace

std::optional<double> missing_bins(const ResultTable& delivered,
                                   const ResultTable& truth) {
  if (truth.bins.empty()) {
    if (delivered.bins.empty()) return 0.0;
    return std::nullopt;
  }
  size_t missing = 0;
  for (const auto& [key, value] : truth.bins)
    if (!delivered.bins.count(key)) ++missing;
  return static_cast<double>(missing) / static_cast<double>(truth.bins.size());
}

MreResult mean_relative_error(const ResultTable& delivered,
                              const ResultTable& truth) {
  MreResult result;
  std::vector<double> errors;
  for (const auto& [key, f] : delivered.bins) {
    auto it = truth.bins.find(key);
    if (it == truth.bins.end()) continue;
    const double a = it->second.estimate;
    if (a == 0.0) {
      ++result.excluded_zero_truth;
      continue;
    }
    errors.push_back(std::fabs(f.estimate - a) / std::fabs(a));
  }
  if (errors.empty()) return result;
  auto [mean, stdev] = mean_stdev(errors);
  result.mean = mean;
  result.stdev = stdev;
  return result;
}

std::optional<double> smape(const ResultTable& delivered,
                            const ResultTable& truth) {
  size_t n = 0;
  double sum = 0.0;
  for (const auto& [key, f] : delivered.bins) {
    auto it = truth.bins.find(key);
    if (it == truth.bins.end()) continue;
    ++n;
    const double a = it->second.estimate;
    const double denom = std::fabs(f.estimate) + std::fabs(a);
    if (denom > 0.0) sum += std::fabs(f.estimate - a) / denom;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

double cosine_distance(const ResultTable& delivered,
                       const ResultTable& truth) {
  double dot = 0.0, ff = 0.0, aa = 0.0;
  for (const auto& [key, f] : delivered.bins) {
    ff += f.estimate * f.estimate;
    auto it = truth.bins.find(key);
    if (it != truth.bins.end()) dot += f.estimate * it->second.estimate;
  }
  for (const auto& [key, a] : truth.bins) aa += a.estimate * a.estimate;
  if (ff == 0.0 && aa == 0.0) return 0.0;
  if (ff == 0.0 || aa == 0.0) return 1.0;
  return std::max(0.0, 1.0 - dot / (std::sqrt(ff) * std::sqrt(aa)));
}

MarginStats margin_stats(const ResultTable& delivered) {
  MarginStats stats;
  if (!delivered.has_margins()) return stats;
  std::vector<double> relative;
  for (const auto& [key, f] : delivered.bins) {
    if (!f.margin || !std::isfinite(*f.margin) || f.estimate == 0.0) {
      ++stats.excluded;
      continue;
    }
    relative.push_back(*f.margin / std::fabs(f.estimate));
  }
  if (relative.empty()) return stats;
  auto [mean, stdev] = mean_stdev(relative);
  stats.mean = mean;
  stats.stdev = stdev;
  return stats;
}

std::optional<uint64_t> out_of_margin(const ResultTable& delivered,
                                      const ResultTable& truth) {
  if (!delivered.has_margins()) return std::nullopt;
  uint64_t count = 0;
  for (const auto& [key, f] : delivered.bins) {
    auto it = truth.bins.find(key);
    if (it == truth.bins.end() || !f.margin) continue;
    if (std::fabs(f.estimate - it->second.estimate) > *f.margin) ++count;
  }
  return count;
}

std::optional<double> bias(const ResultTable& delivered,
                           const ResultTable& truth) {
  double sum_f = 0.0, sum_a = 0.0;
  bool any = false;
  for (const auto& [key, f] : delivered.bins) {
    auto it = truth.bins.find(key);
    if (it == truth.bins.end()) continue;
    any = true;
    sum_f += f.estimate;
    sum_a += it->second.estimate;
  }
  if (!any || sum_a == 0.0) return std::nullopt;
  return sum_f / sum_a;
}

MetricSet compute_all(const ResultTable& delivered, const ResultTable& truth) {
  MetricSet m;
  m.missing_bins = missing_bins(delivered, truth);
  MreResult mre = mean_relative_error(delivered, truth);
  m.mre_mean = mre.mean;
  m.mre_stdev = mre.stdev;
  m.mre_excluded_zero_truth = mre.excluded_zero_truth;
  m.smape = smape(delivered, truth);
  m.cosine_distance = cosine_distance(delivered, truth);
  MarginStats margins = margin_stats(delivered);
  m.margin_mean = margins.mean;
  m.margin_stdev = margins.stdev;
  m.margin_excluded = margins.excluded;
  m.out_of_margin = out_of_margin(delivered, truth);
  m.bias = bias(delivered, truth);
  m.bins_delivered = delivered.bins.size();
  m.bins_in_truth = truth.bins.size();
  for (const auto& [key, f] : delivered.bins)
    if (!truth.bins.count(key)) ++m.spurious_bins;
  return m;
}

}  // namespace idebench

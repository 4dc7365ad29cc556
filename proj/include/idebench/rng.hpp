#pragma once

#include <cstdint>
#include <random>

namespace idebench {

/// One step of the splitmix64 sequence. Used to derive independent
/// per-stream seeds from a user seed and a stream index.
inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double normal_cdf(double x);
double normal_quantile(double p);

/// Two-sided critical value of the standard normal at the given
/// confidence level, e.g. 1.959964 at 0.95.
double z_value(double confidence);

/// Deterministic random source. All draws are derived from the raw
/// mt19937_64 output stream (which the standard pins bit-exactly), so
/// sequences are reproducible across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  /// Independent stream `stream` of a logical generator seeded with `seed`.
  static Rng derive(uint64_t seed, uint64_t stream) {
    uint64_t s = seed ^ 0xA02F7E5BD4593D4BULL;
    for (uint64_t i = 0; i <= stream % 4; ++i) splitmix64(s);
    s ^= stream * 0xD6E8FEB86659FD93ULL;
    return Rng(splitmix64(s));
  }

  uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of precision.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Unbiased integer in [0, n), rejection sampled.
  uint64_t uniform_index(uint64_t n) {
    if (n == 0) return 0;
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  /// Standard normal via inverse-CDF transform (portable, unlike
  /// std::normal_distribution whose algorithm is implementation-defined).
  double normal() {
    double u = uniform();
    if (u < 1e-300) u = 1e-300;
    return normal_quantile(u);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace idebench

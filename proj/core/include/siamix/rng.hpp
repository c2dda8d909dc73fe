#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace siamix {

// Deterministic random source. All variates are derived from the raw mt19937_64
// stream with our own conversions, so a seed reproduces the same values on any
// platform/stdlib (std::*_distribution would not guarantee that).
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed), seed_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // uniform in [0, 1)
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // inclusive integer range
  int64_t uniform_int(int64_t lo, int64_t hi) {
    const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int64_t>(gen_() % span);
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Box-Muller; one variate per call (the pair's second half is cached).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  // normal(0, stddev) rejected outside +-limit*stddev
  double truncated_normal(double stddev, double limit = 2.0) {
    double z = normal();
    while (std::abs(z) > limit) z = normal();
    return z * stddev;
  }

  // independent child stream; a pure function of (construction seed, salt)
  Rng fork(uint64_t salt) const {
    uint64_t x = seed_ ^ (salt + 0x9e3779b97f4a7c15ULL);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return Rng(x);
  }

 private:
  std::mt19937_64 gen_;
  uint64_t seed_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// stream derived from (global seed, index); used so per-sample randomness is
// independent of scheduling order
inline Rng sample_rng(uint64_t global_seed, uint64_t index) {
  return Rng(global_seed).fork(index);
}

}  // namespace siamix

#pragma once

#include <cstdint>
#include <string_view>

namespace metricsim {

// SplitMix64. All randomness in the library flows through this generator so
// that splits, initializations and synthetic data are reproducible across
// standard library implementations, not just across runs.
struct SplitMix64 {
  uint64_t state;

  explicit SplitMix64(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
};

uint64_t mix_seed(uint64_t a, uint64_t b);
uint64_t mix_seed(uint64_t a, uint64_t b, uint64_t c);
uint64_t mix_seed(uint64_t a, uint64_t b, uint64_t c, uint64_t d);

// FNV-1a, used to fold dataset names into seed derivations.
uint64_t hash_string(const char* data, size_t len);
uint64_t hash_string(const std::string_view& s);

class Rng {
 public:
  explicit Rng(uint64_t seed) : sm_(seed) {}

  uint64_t next_u64() { return sm_.next(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(sm_.next() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform in [0, n) via rejection, bias-free.
  uint64_t bounded(uint64_t n);

  // Standard normal via Box-Muller.
  double normal();

 private:
  SplitMix64 sm_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace metricsim

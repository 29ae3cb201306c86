#include "metricsim/rng.hpp"

#include <cmath>
#include <numbers>
#include <string_view>

namespace metricsim {

namespace {
uint64_t mix2(uint64_t a, uint64_t b) {
  SplitMix64 sm(a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2)));
  return sm.next();
}
}  // namespace

uint64_t mix_seed(uint64_t a, uint64_t b) { return mix2(a, b); }

uint64_t mix_seed(uint64_t a, uint64_t b, uint64_t c) {
  return mix2(mix2(a, b), c);
}

uint64_t mix_seed(uint64_t a, uint64_t b, uint64_t c, uint64_t d) {
  return mix2(mix2(mix2(a, b), c), d);
}

uint64_t hash_string(const char* data, size_t len) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (size_t i = 0; i < len; ++i) {
    h ^= static_cast<unsigned char>(data[i]);
    h *= 0x100000001b3ull;
  }
  return h;
}

uint64_t hash_string(const std::string_view& s) {
  return hash_string(s.data(), s.size());
}

uint64_t Rng::bounded(uint64_t n) {
  if (n == 0) return 0;
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x;
  do {
    x = sm_.next();
  } while (x >= limit);
  return x % n;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] so the log is finite.
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

}  // namespace metricsim

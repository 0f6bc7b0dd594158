#pragma once

#include <cstdint>
#include <string_view>

#include "bttb/error.hpp"

namespace bttb {

/// Deterministic splittable PRNG built on the splitmix64 mixer.
///
/// split() derives an independent child stream without advancing the parent,
/// so the stream consumed for one (fold, row, strategy) can never perturb
/// another. Output is identical across platforms and standard libraries,
/// which the std <random> distributions do not guarantee.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix(state_);
  }

  /// Unbiased draw from [0, n).
  std::size_t uniform_index(std::size_t n) {
    if (n == 0) throw Error(Errc::invalid_argument, "uniform_index: n must be >= 1");
    const std::uint64_t range = n;
    const std::uint64_t reject_below = (0 - range) % range;  // 2^64 mod n
    for (;;) {
      const std::uint64_t v = next();
      if (v >= reject_below) return static_cast<std::size_t>(v % range);
    }
  }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform_double() {
    return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0);
  }

  bool bernoulli(double p) { return uniform_double() < p; }

  Rng split(std::uint64_t key) const {
    return Rng(mix(state_ ^ mix(key + 0x632BE59BD9B4E019ull)));
  }

  Rng split(std::string_view key) const { return split(fnv1a(key)); }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  static std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001B3ull;
    }
    return h;
  }

  std::uint64_t state_;
};

}  // namespace bttb

#pragma once

// Reproducible random streams. The generator is std::mt19937_64, whose output
// sequence is fixed by the C++ standard; the bounded-integer, uniform-real and
// normal transforms are implemented here (not via <random> distributions,
// whose algorithms are implementation-defined) so scores reproduce across
// toolchains.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

namespace saleval {

inline constexpr std::string_view kRngAlgorithm = "mt19937_64";
inline constexpr std::string_view kSeedDerivation =
    "splitmix64(splitmix64(splitmix64(splitmix64(master) ^ fnv1a64(image_id)) ^ fnv1a64(metric_id)) ^ trial)";

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Seed for one trial of one metric on one image.
constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view image_id, std::string_view metric_id,
                                    std::uint64_t trial_index) {
  std::uint64_t h = mix64(master_seed);
  h = mix64(h ^ fnv1a64(image_id));
  h = mix64(h ^ fnv1a64(metric_id));
  return mix64(h ^ trial_index);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound), unbiased by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % bound;
    }
  }

  /// Uniform real in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (one variate per two uniforms).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace saleval

#pragma once

#include <cmath>
#include <cstdint>

namespace cogsat::rng {

// Counter-based generator built on the splitmix64 finalizer:
//
//   output(i) = mix64(key + i * 0x9E3779B97F4A7C15)        i = 1, 2, 3, ...
//
// The i-th output depends only on (key, i), so independent trials and
// independent position/shadowing streams are derived by key, never by
// consuming a shared state. Substream keys come from derive_stream below.
// The algorithm is pinned; regenerating any experiment with the same seed
// reproduces every draw bit-exactly, also under parallel trial execution.

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

// Child key for substream `tag` of `seed`. Stable across runs and platforms.
constexpr std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t tag) {
  return mix64(seed ^ mix64(tag * kGolden + 0x632BE59BD9B4E019ULL));
}

// Stream tags used across the project. Position streams are separate from
// each other so that e.g. adding PUs never perturbs SU draws.
inline constexpr std::uint64_t kTagPuPositions = 1;
inline constexpr std::uint64_t kTagSuPositions = 2;
inline constexpr std::uint64_t kTagShadowF = 3;
inline constexpr std::uint64_t kTagShadowG = 4;
inline constexpr std::uint64_t kTagTrialBase = 0x7452694C00000000ULL;
inline constexpr std::uint64_t kTagExperimentBase = 0x4558504500000000ULL;

constexpr std::uint64_t trial_seed(std::uint64_t seed, std::int64_t trial) {
  return derive_stream(seed, kTagTrialBase + static_cast<std::uint64_t>(trial));
}

class Stream {
 public:
  explicit Stream(std::uint64_t key) : key_(key) {}

  std::uint64_t next_u64() {
    counter_ += 1;
    return mix64(key_ + counter_ * kGolden);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_unit();
  }

  // Box-Muller; consumes exactly two uniforms per call (second root unused,
  // so the draw count per sample stays fixed).
  double next_normal(double sigma) {
    const double u1 = 1.0 - next_unit();  // (0, 1], keeps log finite
    const double u2 = next_unit();
    return sigma * std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace cogsat::rng

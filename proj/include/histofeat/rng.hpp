#pragma once

#include <cstdint>

namespace histofeat {

// SplitMix64 (Steele, Lea, Flood 2014). Every random decision in the library
// draws from this generator so results reproduce bit-for-bit in any language
// that has 64-bit unsigned arithmetic:
//
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
//
// Bounded draws use the multiply-high reduction floor(next() * n / 2^64).
// Sub-streams are derived with `derive_seed(master, index)`, which is the
// finalizer applied to master + (index + 1) * 0x9E3779B97F4A7C15.
class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    state_ += kGamma;
    return mix(state_);
  }

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t bounded(std::uint64_t n) noexcept {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return SplitMix64::mix(master + (index + 1) * SplitMix64::kGamma);
}

}  // namespace histofeat

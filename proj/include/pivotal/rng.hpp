#ifndef PIVOTAL_RNG_HPP
#define PIVOTAL_RNG_HPP

#include <cstdint>
#include <limits>

namespace pivotal {

/// SplitMix64 (Steele, Lea & Flood 2014; constants from Vigna's reference code).
/// Satisfies UniformRandomBitGenerator. The full state is the 64-bit counter, so a stream is
/// reproducible on any platform from its seed alone.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    state_ += kGamma;
    return mix(state_);
  }

  /// Uniform double in the open interval (0, 1) with 53 random bits.
  constexpr double uniform() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  constexpr std::uint64_t state() const noexcept { return state_; }

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

 private:
  std::uint64_t state_;
};

/// Independent stream for replicate `index` of an experiment seeded with `seed`:
/// the starting state is mix(mix(seed) ^ mix(index * gamma + 1)). Depends only on (seed, index),
/// so replicates can run in any order or on any thread.
constexpr SplitMix64 substream(std::uint64_t seed, std::uint64_t index) noexcept {
  const std::uint64_t key = SplitMix64::mix(seed) ^ SplitMix64::mix(index * SplitMix64::kGamma + 1);
  return SplitMix64(SplitMix64::mix(key));
}

}  // namespace pivotal

#endif  // PIVOTAL_RNG_HPP

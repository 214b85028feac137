#ifndef RITZ_RNG_HPP
#define RITZ_RNG_HPP

#include <cstdint>

namespace ritz {

/// SplitMix64 in counter mode: draw n of stream s is mix(key(seed, s) + n * gamma).
/// Streams derived from one seed are independent, so changing how many
/// numbers one stream consumes never shifts another stream.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(mix(seed * 0x9E3779B97F4A7C15ULL ^ mix(stream + 0xD1B54A32D192ED03ULL))) {}

  std::uint64_t next_u64() { return at(counter_++); }
  std::uint64_t at(std::uint64_t n) const { return mix(key_ + (n + 1) * kGamma); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  std::uint64_t counter() const { return counter_; }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Stream ids in use.
namespace streams {
inline constexpr std::uint64_t kInit = 1;
inline constexpr std::uint64_t kInterior = 2;
inline constexpr std::uint64_t kBoundary = 3;
}  // namespace streams

}  // namespace ritz

#endif  // RITZ_RNG_HPP

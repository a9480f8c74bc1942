#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace urn {

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed of the `index`-th child stream of `base`. Children of one base never
/// share a seed with each other for indices below 2^64.
constexpr std::uint64_t split_seed(std::uint64_t base, std::uint64_t index) noexcept {
  return mix64(base + 0x9E3779B97F4A7C15ULL * (index + 1));
}

/// 64-bit Mersenne Twister with platform-independent conversions.
///
/// std::uniform_*_distribution output is implementation-defined, so both
/// conversions here consume exactly one engine word and are spelled out.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Index in [0, n) by multiply-high. Bias is below n / 2^64.
  std::size_t below(std::size_t n) {
    __extension__ using u128 = unsigned __int128;
    const auto wide = static_cast<u128>(next()) * n;
    return static_cast<std::size_t>(wide >> 64);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace urn

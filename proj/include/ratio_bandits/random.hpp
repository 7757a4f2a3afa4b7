#pragma once

// Seeding and counter-based random streams.
//
// Environment randomness is a pure function of (key, stream tag, i, j):
// every potential reward, context coordinate and parameter draw is
// addressed directly, so two policies that pull different arms still face
// identical potential outcomes (common random numbers). Policy randomness
// uses an ordinary sequential engine seeded from the run key.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

namespace ratio_bandits {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t value) noexcept {
  return splitmix64(seed ^ splitmix64(value));
}

template <class... Rest>
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t value,
                                 Rest... rest) noexcept {
  return mix_seed(mix_seed(seed, value), static_cast<std::uint64_t>(rest)...);
}

inline constexpr std::uint64_t fnv1a(std::string_view text) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

enum class StreamTag : std::uint64_t {
  Parameter = 1,
  Context = 2,
  Noise = 3,
  Sequential = 4,
};

/// Stateless keyed generator.
class CounterStream {
 public:
  explicit constexpr CounterStream(std::uint64_t key) noexcept : key_(key) {}

  std::uint64_t key() const noexcept { return key_; }

  std::uint64_t bits(StreamTag tag, std::uint64_t i, std::uint64_t j,
                     std::uint64_t k = 0) const noexcept {
    return mix_seed(key_, static_cast<std::uint64_t>(tag), i, j, k);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform(StreamTag tag, std::uint64_t i, std::uint64_t j,
                 std::uint64_t k = 0) const noexcept {
    return static_cast<double>(bits(tag, i, j, k) >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller on two addressed uniforms.
  double normal(StreamTag tag, std::uint64_t i, std::uint64_t j) const noexcept {
    const double u1 = 1.0 - uniform(tag, i, j, 0);  // (0, 1]
    const double u2 = uniform(tag, i, j, 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t key_;
};

using PolicyEngine = std::mt19937_64;

inline PolicyEngine policy_engine(std::uint64_t env_seed, std::string_view policy_label) {
  return PolicyEngine(mix_seed(env_seed, static_cast<std::uint64_t>(StreamTag::Sequential),
                               fnv1a(policy_label)));
}

}  // namespace ratio_bandits

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>

namespace ripley {

/// A (seed, stream) pair naming one random stream. Distinct pairs give
/// streams that are seeded through independent hash mixing.
struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  /// Child seed for replicate `index`: the parent pair is folded into the
  /// new seed so that nested substreams never collide with siblings.
  [[nodiscard]] RngSeed substream(std::uint64_t index) const;

  friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

std::uint64_t mix64(std::uint64_t x) noexcept;
std::uint64_t hash_values(std::initializer_list<std::uint64_t> values) noexcept;

using Engine = std::mt19937_64;

Engine make_engine(RngSeed seed);

/// Eight-byte generator for places that need very many independent streams
/// (one per spatial cell in the perfect sampler).
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Uniform double in [0, 1) from the top 53 bits; identical on every
/// standard library, unlike std::uniform_real_distribution.
template <class Urbg>
double uniform01(Urbg& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace ripley

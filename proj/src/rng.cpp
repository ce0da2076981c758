// SPDX-License-Identifier: Apache-2.0
#include "ripley/rng.hpp"

#include <array>

namespace ripley {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_values(std::initializer_list<std::uint64_t> values) noexcept {
  std::uint64_t h = 0x243F6A8885A308D3ULL;
  for (std::uint64_t v : values) h = mix64(h ^ mix64(v));
  return h;
}

RngSeed RngSeed::substream(std::uint64_t index) const {
  return RngSeed{hash_values({seed, stream}), index};
}

Engine make_engine(RngSeed seed) {
  const std::uint64_t a = mix64(seed.seed);
  const std::uint64_t b = mix64(seed.stream ^ 0xD1B54A32D192ED03ULL);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return Engine(seq);
}

}  // namespace ripley

#pragma once

#include <cstdint>
#include <random>

namespace hdc {

using Rng = std::mt19937_64;

// splitmix64 finalizer; a bijective avalanche mix of 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based stream derivation: stream k of a master seed depends only on
// (master_seed, k), so replications can be generated in any order.
inline Rng make_stream(std::uint64_t master_seed, std::uint64_t stream) {
  const std::uint64_t a = mix64(master_seed);
  const std::uint64_t b = mix64(a ^ mix64(stream + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32)};
  return Rng(seq);
}

// Stream indices reserved outside the replication range.
inline constexpr std::uint64_t kFixedMeanStream = ~std::uint64_t{0};

}  // namespace hdc

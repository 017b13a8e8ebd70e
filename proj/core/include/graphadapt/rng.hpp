#pragma once

#include <cstdint>
#include <random>

namespace graphadapt {

/// The only random engine used by the library; always seeded explicitly.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer; decorrelates derived seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for an independent stream `stream` derived from `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix_seed(mix_seed(seed) ^ (stream * 0xd1b54a32d192ed03ULL + 1));
}

inline Rng make_rng(std::uint64_t seed) { return Rng(mix_seed(seed)); }

}  // namespace graphadapt

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace hypermosbm {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent stream seed from a base seed and a path of task
/// indices, e.g. derive_seed(seed, {fold, restart}).
constexpr std::uint64_t derive_seed(std::uint64_t base,
                                    std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix64(base);
  for (std::uint64_t p : path) s = mix64(s ^ mix64(p + 0x632be59bd9b4e019ULL));
  return s;
}

// Stream tags, so that e.g. the fold-shuffle stream never coincides with the
// negative-sampling stream of fold 0.
namespace stream {
inline constexpr std::uint64_t kFolds = 0xF01D;
inline constexpr std::uint64_t kAucPairs = 0xA0C;
inline constexpr std::uint64_t kFit = 0xF17;
inline constexpr std::uint64_t kInstance = 0x1257;
inline constexpr std::uint64_t kBootstrap = 0xB007;
}  // namespace stream

}  // namespace hypermosbm

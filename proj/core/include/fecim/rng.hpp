#pragma once

// Counter-based Gaussian draws. A value is a pure function of
// (seed, a, b), so cells can be sampled in any order or in parallel and
// replayed exactly.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace fecim::rng {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t key(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
  std::uint64_t h = mix64(seed ^ 0x5851f42d4c957f2dULL);
  h = mix64(h ^ (a * 0xd1342543de82ef95ULL));
  return mix64(h ^ (b * 0xaf251af3b0f025b5ULL));
}

/// Uniform in (0, 1]; never returns 0 so it is safe under log().
constexpr double unit_open(std::uint64_t bits) noexcept {
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

/// Standard normal keyed by (seed, a, b), Box-Muller on two counter outputs.
inline double standard_normal(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
  const std::uint64_t k = key(seed, a, b);
  const double u1 = unit_open(mix64(k + 1));
  const double u2 = unit_open(mix64(k + 2));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Derive an independent stream seed, e.g. one per Monte Carlo trial or tile.
constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

}  // namespace fecim::rng

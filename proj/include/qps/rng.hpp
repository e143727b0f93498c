#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <type_traits>

namespace qps {

// All randomness in the simulator flows through this engine. The helpers
// below avoid std distributions so that streams are identical across
// standard library implementations.
using Rng = std::mt19937_64;

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased uniform integer in [0, bound). bound must be positive.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  // Lemire's multiply-shift rejection.
  std::uint64_t x = rng();
  __uint128_t m = static_cast<__uint128_t>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      x = rng();
      m = static_cast<__uint128_t>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

// Number of failures before the first success of a Bernoulli(p) trial
// sequence: P(k) = p (1-p)^k, k >= 0. Mean (1-p)/p.
inline std::uint64_t geometric0(Rng& rng, double p) {
  if (p >= 1.0) return 0;
  const double u = uniform01(rng);
  const double k = std::floor(std::log1p(-u) / std::log1p(-p));
  if (!(k < 9.0e18)) return UINT64_C(9000000000000000000);
  return static_cast<std::uint64_t>(k);
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += UINT64_C(0x9e3779b97f4a7c15);
  x = (x ^ (x >> 30)) * UINT64_C(0xbf58476d1ce4e5b9);
  x = (x ^ (x >> 27)) * UINT64_C(0x94d049bb133111eb);
  return x ^ (x >> 31);
}

namespace detail {
inline std::uint64_t seed_word(std::uint64_t v) { return v; }
inline std::uint64_t seed_word(double v) { return std::bit_cast<std::uint64_t>(v); }
}  // namespace detail

// Order-sensitive hash of a master seed and any number of integral or
// floating-point fields.
template <typename... Fields>
std::uint64_t derive_seed(std::uint64_t master, Fields... fields) {
  std::uint64_t h = splitmix64(master);
  ((h = splitmix64(h ^ detail::seed_word(
                           static_cast<std::conditional_t<std::is_floating_point_v<Fields>,
                                                          double, std::uint64_t>>(fields)))),
   ...);
  return h;
}

}  // namespace qps

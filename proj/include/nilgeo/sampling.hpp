#pragma once

#include "nilgeo/matrix.hpp"

#include <cstdint>
#include <random>

namespace nilgeo {

using Rng = std::mt19937_64;

/// Seed for sample `index` of a stream, independent of how samples are scheduled.
inline std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Rng sample_rng(std::uint64_t seed, std::uint64_t index) { return Rng(sample_seed(seed, index)); }

/// p/q with |p| <= max_num and 1 <= q <= max_den.
inline Rational random_rational(Rng& rng, long max_num = 9, long max_den = 6) {
  std::uniform_int_distribution<long> num(-max_num, max_num), den(1, max_den);
  return Rational(num(rng), den(rng));
}

inline Vector<Rational> random_rational_vector(Rng& rng, std::size_t n, long max_num = 9, long max_den = 6) {
  Vector<Rational> v(n);
  for (auto& x : v) x = random_rational(rng, max_num, max_den);
  return v;
}

inline Vector<double> random_double_vector(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

}  // namespace nilgeo

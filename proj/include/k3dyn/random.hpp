#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace k3dyn {

/// SplitMix64 finalizer; the counter scheme behind all per-task seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for task `index` of a run with master seed `master`.
inline std::uint64_t sub_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

using Rng = std::mt19937_64;

// Distributions are written out so streams do not depend on the standard
// library's distribution algorithms.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline long long uniform_int(Rng& rng, long long lo, long long hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return lo + static_cast<long long>(x % span);
}

/// Unit vector in C^2 whose class in P^1 is uniform for the Fubini-Study area.
inline std::array<std::complex<double>, 2> fubini_study_pair(Rng& rng) {
  const double cos_theta = 2.0 * uniform01(rng) - 1.0;
  const double phi = 2.0 * std::numbers::pi * uniform01(rng);
  const double c = std::sqrt(0.5 * (1.0 + cos_theta));
  const double s = std::sqrt(std::max(0.0, 0.5 * (1.0 - cos_theta)));
  return {std::complex<double>(c, 0.0), std::polar(s, phi)};
}

}  // namespace k3dyn

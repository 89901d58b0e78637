#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "mildns/field_ops.hpp"
#include "mildns/grid.hpp"

namespace testsupport {

inline double uniform(std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Random field with entries in [-1, 1] and a random fraction of zeroed nodes,
// so that supports and level sets vary between draws.
inline mildns::Field random_field(const mildns::Grid& g, int rank, std::mt19937_64& rng,
                                  double zero_fraction = 0.2) {
  mildns::Field f(g, rank);
  const double scale = std::exp(uniform(rng, -2.0, 2.0));
  const std::size_t m = g.size();
  for (std::size_t node = 0; node < m; ++node) {
    const bool zero = uniform(rng) < zero_fraction;
    for (std::size_t c = 0; c < f.components(); ++c)
      f.at(c, node) = zero ? 0.0 : scale * uniform(rng, -1.0, 1.0);
  }
  return f;
}

inline mildns::Field random_solenoidal(const mildns::Grid& g, std::uint64_t seed, double amplitude,
                                       double slope = 2.0) {
  mildns::InitialDataSpec spec;
  spec.kind = mildns::InitialDataKind::random_solenoidal;
  spec.seed = seed;
  spec.amplitude = amplitude;
  spec.spectral_slope = slope;
  return mildns::generate_initial_data(g, spec);
}

inline double max_abs_diff(const mildns::Field& a, const mildns::Field& b) {
  double m = 0.0;
  auto va = a.values();
  auto vb = b.values();
  for (std::size_t i = 0; i < va.size(); ++i) m = std::max(m, std::abs(va[i] - vb[i]));
  return m;
}

}  // namespace testsupport

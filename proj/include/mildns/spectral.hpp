#pragma once

#include <array>
#include <complex>
#include <cstddef>

#include "mildns/grid.hpp"

namespace mildns {

// Forward transform of every component (unnormalised).
SpectralField forward(const Field& f);
// Inverse transform, divided by N^n so that inverse(forward(f)) == f.
Field inverse(const SpectralField& s);

// Single-component transforms on raw buffers. The inverse is unnormalised
// and leaves its input untouched.
void forward_component(const Grid& g, const double* in, std::complex<double>* out);
void inverse_component(const Grid& g, const std::complex<double>* in, double* out);

struct Mode {
  std::size_t index;
  std::array<long, 4> k;
  // Physical frequency 2 pi k / L.
  std::array<double, 4> xi;
  // Frequency used for odd multipliers: Nyquist components set to zero so
  // that odd symbols stay consistent with a real field.
  std::array<double, 4> xi_odd;
  double xi2;
  double xi_odd2;
  // Max |k_d| over axes.
  long kmax;
  // Weight of the mode in a full-spectrum sum (2 for modes whose conjugate
  // is not stored, 1 otherwise).
  double weight;
};

// Calls f(const Mode&) for every stored mode in storage order.
template <class F>
void for_each_mode(const Grid& g, F&& f) {
  const int n = g.dim();
  const std::size_t N = g.points_per_axis();
  const std::size_t half = N / 2 + 1;
  const long nyq = static_cast<long>(N / 2);
  const double scale = 2.0 * 3.14159265358979323846 / g.length();
  std::array<std::size_t, 4> idx{0, 0, 0, 0};
  Mode m{};
  const std::size_t total = g.spectral_size();
  for (std::size_t s = 0; s < total; ++s) {
    m.index = s;
    m.xi2 = 0.0;
    m.xi_odd2 = 0.0;
    m.kmax = 0;
    for (int d = 0; d < n; ++d) {
      long k;
      if (d == n - 1) {
        k = static_cast<long>(idx[d]);
      } else {
        k = static_cast<long>(idx[d]);
        if (k > nyq) k -= static_cast<long>(N);
      }
      m.k[d] = k;
      const long ak = k < 0 ? -k : k;
      if (ak > m.kmax) m.kmax = ak;
      m.xi[d] = scale * static_cast<double>(k);
      m.xi_odd[d] = (ak == nyq) ? 0.0 : m.xi[d];
      m.xi2 += m.xi[d] * m.xi[d];
      m.xi_odd2 += m.xi_odd[d] * m.xi_odd[d];
    }
    const long klast = m.k[n - 1];
    m.weight = (klast == 0 || klast == nyq) ? 1.0 : 2.0;
    f(static_cast<const Mode&>(m));
    for (int d = n - 1; d >= 0; --d) {
      const std::size_t lim = (d == n - 1) ? half : N;
      if (++idx[d] < lim) break;
      idx[d] = 0;
    }
  }
}

// True when the mode survives the 2/3 truncation (|k_d| <= N/3 on every axis).
inline bool dealias_keep(const Grid& g, const Mode& m) noexcept {
  return 3 * m.kmax <= static_cast<long>(g.points_per_axis());
}

}  // namespace mildns

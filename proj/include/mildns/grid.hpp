#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace mildns {

// Periodic box [0, L)^n sampled at N points per axis.
class Grid {
public:
  // N must be a power of two, N >= 4, n in [1, 4].
  Grid(int n, std::size_t N, double L);

  // Same as the constructor but accepts any even N >= 4. Used for kernel
  // quadrature lattices whose sizes are fixed by accuracy targets.
  static Grid lattice(int n, std::size_t N, double L);

  int dim() const noexcept { return n_; }
  std::size_t points_per_axis() const noexcept { return N_; }
  double length() const noexcept { return L_; }
  double spacing() const noexcept { return L_ / static_cast<double>(N_); }
  double cell_measure() const noexcept { return cell_; }
  double volume() const noexcept;

  std::size_t size() const noexcept { return size_; }
  // Number of stored modes in the half-complex layout.
  std::size_t spectral_size() const noexcept { return spectral_size_; }

  // Coordinate of node i along an axis, in [0, L).
  double coordinate(std::size_t i) const noexcept { return static_cast<double>(i) * spacing(); }
  // Coordinate wrapped into [-L/2, L/2).
  double centered(std::size_t i) const noexcept;
  // Signed integer wavenumber for index i along a full axis.
  long wavenumber(std::size_t i) const noexcept;
  double frequency(long k) const noexcept;

  // Row-major multi-index of a flat node index, last axis fastest.
  void unravel(std::size_t flat, std::size_t* idx) const noexcept;
  // Periodic distance between two nodes.
  double periodic_distance(std::size_t a, std::size_t b) const noexcept;

  bool operator==(const Grid& o) const noexcept {
    return n_ == o.n_ && N_ == o.N_ && L_ == o.L_;
  }

private:
  Grid(int n, std::size_t N, double L, bool require_pow2);
  int n_;
  std::size_t N_;
  double L_;
  double cell_;
  std::size_t size_;
  std::size_t spectral_size_;
};

// Real samples of a rank-r tensor field, n^r components stored contiguously.
class Field {
public:
  Field(const Grid& g, int rank);
  Field(const Grid& g, int rank, std::vector<double> values);

  const Grid& grid() const noexcept { return grid_; }
  int rank() const noexcept { return rank_; }
  std::size_t components() const noexcept { return comps_; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> component(std::size_t c) const noexcept;
  std::span<double> component(std::size_t c) noexcept;

  double& at(std::size_t c, std::size_t node) noexcept { return values_[c * grid_.size() + node]; }
  double at(std::size_t c, std::size_t node) const noexcept { return values_[c * grid_.size() + node]; }

  // Pointwise Euclidean (Frobenius) magnitude over components.
  std::vector<double> magnitude() const;
  double sup_norm() const;
  double max_abs() const;
  // Discrete L2 norm, sqrt(sum |u|^2 h^n).
  double l2_norm() const;

  // Throws NumericError when any sample is NaN or infinite.
  void require_finite() const;

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(double s);

private:
  Grid grid_;
  int rank_;
  std::size_t comps_;
  std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

std::size_t component_count(int n, int rank);

// Fourier coefficients of a real field in the half-complex layout (last axis
// holds modes 0..N/2). Coefficients are unnormalised transform outputs.
class SpectralField {
public:
  SpectralField(const Grid& g, int rank);

  const Grid& grid() const noexcept { return grid_; }
  int rank() const noexcept { return rank_; }
  std::size_t components() const noexcept { return comps_; }

  std::span<std::complex<double>> component(std::size_t c) noexcept;
  std::span<const std::complex<double>> component(std::size_t c) const noexcept;
  std::vector<std::complex<double>>& data() noexcept { return coeffs_; }
  const std::vector<std::complex<double>>& data() const noexcept { return coeffs_; }

private:
  Grid grid_;
  int rank_;
  std::size_t comps_;
  std::vector<std::complex<double>> coeffs_;
};

}  // namespace mildns

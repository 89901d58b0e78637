#include "mildns/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mildns/errors.hpp"

namespace mildns {

namespace {

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

std::size_t component_count(int n, int rank) {
  return ipow(static_cast<std::size_t>(n), rank);
}

Grid::Grid(int n, std::size_t N, double L) : Grid(n, N, L, true) {}

Grid Grid::lattice(int n, std::size_t N, double L) { return Grid(n, N, L, false); }

Grid::Grid(int n, std::size_t N, double L, bool require_pow2) : n_(n), N_(N), L_(L) {
  if (n < 1 || n > 4) throw DomainError("grid dimension must be in [1, 4], got " + std::to_string(n));
  if (N < 4) throw DomainError("points per axis must be at least 4");
  if (require_pow2 && (N & (N - 1)) != 0)
    throw DomainError("points per axis must be a power of two, got " + std::to_string(N));
  if (N % 2 != 0) throw DomainError("points per axis must be even");
  if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("box length must be positive and finite");
  cell_ = std::pow(L / static_cast<double>(N), n);
  size_ = ipow(N, n);
  spectral_size_ = ipow(N, n - 1) * (N / 2 + 1);
}

double Grid::volume() const noexcept { return std::pow(L_, n_); }

double Grid::centered(std::size_t i) const noexcept {
  const double x = coordinate(i);
  return (2 * i >= N_) ? x - L_ : x;
}

long Grid::wavenumber(std::size_t i) const noexcept {
  const long k = static_cast<long>(i);
  return (2 * i > N_) ? k - static_cast<long>(N_) : k;
}

double Grid::frequency(long k) const noexcept {
  return 2.0 * M_PI * static_cast<double>(k) / L_;
}

void Grid::unravel(std::size_t flat, std::size_t* idx) const noexcept {
  for (int d = n_ - 1; d >= 0; --d) {
    idx[d] = flat % N_;
    flat /= N_;
  }
}

double Grid::periodic_distance(std::size_t a, std::size_t b) const noexcept {
  std::size_t ia[4], ib[4];
  unravel(a, ia);
  unravel(b, ib);
  double s = 0.0;
  for (int d = 0; d < n_; ++d) {
    std::size_t diff = ia[d] > ib[d] ? ia[d] - ib[d] : ib[d] - ia[d];
    diff = std::min(diff, N_ - diff);
    const double x = static_cast<double>(diff) * spacing();
    s += x * x;
  }
  return std::sqrt(s);
}

Field::Field(const Grid& g, int rank) : grid_(g), rank_(rank) {
  if (rank < 0 || rank > 4) throw RankError("field rank must be in [0, 4]");
  comps_ = component_count(g.dim(), rank);
  values_.assign(comps_ * g.size(), 0.0);
}

Field::Field(const Grid& g, int rank, std::vector<double> values) : grid_(g), rank_(rank) {
  if (rank < 0 || rank > 4) throw RankError("field rank must be in [0, 4]");
  comps_ = component_count(g.dim(), rank);
  if (values.size() != comps_ * g.size())
    throw DomainError("field value count does not match grid and rank");
  values_ = std::move(values);
  require_finite();
}

std::span<const double> Field::component(std::size_t c) const noexcept {
  return {values_.data() + c * grid_.size(), grid_.size()};
}

std::span<double> Field::component(std::size_t c) noexcept {
  return {values_.data() + c * grid_.size(), grid_.size()};
}

std::vector<double> Field::magnitude() const {
  const std::size_t m = grid_.size();
  std::vector<double> out(m, 0.0);
  if (comps_ == 1) {
    for (std::size_t i = 0; i < m; ++i) out[i] = std::abs(values_[i]);
    return out;
  }
  for (std::size_t c = 0; c < comps_; ++c) {
    const double* v = values_.data() + c * m;
    for (std::size_t i = 0; i < m; ++i) out[i] += v[i] * v[i];
  }
  for (auto& x : out) x = std::sqrt(x);
  return out;
}

double Field::sup_norm() const {
  const auto mag = magnitude();
  double s = 0.0;
  for (double x : mag) s = std::max(s, x);
  return s;
}

double Field::max_abs() const {
  double s = 0.0;
  for (double x : values_) s = std::max(s, std::abs(x));
  return s;
}

double Field::l2_norm() const {
  double s = 0.0;
  for (double x : values_) s += x * x;
  return std::sqrt(s * grid_.cell_measure());
}

void Field::require_finite() const {
  for (double x : values_)
    if (!std::isfinite(x)) throw NumericError("field contains non-finite samples");
}

Field& Field::operator+=(const Field& o) {
  if (!(grid_ == o.grid_) || rank_ != o.rank_) throw RankError("field shape mismatch in +=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& o) {
  if (!(grid_ == o.grid_) || rank_ != o.rank_) throw RankError("field shape mismatch in -=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

Field& Field::operator*=(double s) {
  for (auto& x : values_) x *= s;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

SpectralField::SpectralField(const Grid& g, int rank) : grid_(g), rank_(rank) {
  comps_ = component_count(g.dim(), rank);
  coeffs_.assign(comps_ * g.spectral_size(), {0.0, 0.0});
}

std::span<std::complex<double>> SpectralField::component(std::size_t c) noexcept {
  return {coeffs_.data() + c * grid_.spectral_size(), grid_.spectral_size()};
}

std::span<const std::complex<double>> SpectralField::component(std::size_t c) const noexcept {
  return {coeffs_.data() + c * grid_.spectral_size(), grid_.spectral_size()};
}

}  // namespace mildns

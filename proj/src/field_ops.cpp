#include "mildns/field_ops.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "mildns/errors.hpp"
#include "mildns/spectral.hpp"

namespace mildns {

namespace {

using cplx = std::complex<double>;
constexpr cplx I{0.0, 1.0};

void require_vector(const Field& u, const char* op) {
  if (u.rank() != 1) throw RankError(std::string(op) + " expects a vector field");
}

// Applies P = I - xi xi^T / |xi|^2 in place on a vector spectral field.
void project_in_place(SpectralField& s) {
  const Grid& g = s.grid();
  const int n = g.dim();
  std::array<cplx*, 4> c{};
  for (int d = 0; d < n; ++d) c[d] = s.component(d).data();
  for_each_mode(g, [&](const Mode& m) {
    if (m.xi_odd2 == 0.0) return;
    cplx dot = 0.0;
    for (int d = 0; d < n; ++d) dot += m.xi_odd[d] * c[d][m.index];
    dot /= m.xi_odd2;
    for (int d = 0; d < n; ++d) c[d][m.index] -= m.xi_odd[d] * dot;
  });
}

void scale_to_sup(Field& f, double amplitude) {
  const double s = f.sup_norm();
  if (amplitude == 0.0 || s == 0.0) {
    f *= 0.0;
    return;
  }
  f *= amplitude / s;
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Field taylor_green(const Grid& g, double amplitude) {
  if (g.dim() != 2) throw UnsupportedSpec("taylor-green data is defined for n = 2 only");
  Field u(g, 1);
  const std::size_t N = g.points_per_axis();
  const double k = 2.0 * M_PI / g.length();
  for (std::size_t i = 0; i < N; ++i) {
    const double x = g.coordinate(i);
    for (std::size_t j = 0; j < N; ++j) {
      const double y = g.coordinate(j);
      const std::size_t node = i * N + j;
      u.at(0, node) = -amplitude * std::cos(k * x) * std::sin(k * y);
      u.at(1, node) = amplitude * std::sin(k * x) * std::cos(k * y);
    }
  }
  return u;
}

Field gaussian_vortex(const Grid& g, double amplitude, double width) {
  if (!(width > 0.0)) throw DomainError("vortex width must be positive");
  const int n = g.dim();
  if (n < 2) throw UnsupportedSpec("gaussian vortex needs n >= 2");
  Field psi(g, 0);
  std::size_t idx[4];
  const double c = 0.5 * g.length();
  for (std::size_t node = 0; node < g.size(); ++node) {
    g.unravel(node, idx);
    double r2 = 0.0;
    for (int d = 0; d < n; ++d) {
      const double x = g.coordinate(idx[d]) - c;
      r2 += x * x;
    }
    psi.at(0, node) = std::exp(-r2 / (2.0 * width * width));
  }
  const Field grad = gradient(psi);
  Field u(g, 1);
  auto u0 = u.component(0);
  auto u1 = u.component(1);
  auto g0 = grad.component(0);
  auto g1 = grad.component(1);
  for (std::size_t i = 0; i < g.size(); ++i) {
    u0[i] = g1[i];
    u1[i] = -g0[i];
  }
  scale_to_sup(u, amplitude);
  return u;
}

Field random_solenoidal(const Grid& g, double amplitude, std::uint64_t seed, double slope) {
  std::mt19937_64 rng(seed);
  Field noise(g, 1);
  for (auto& x : noise.values()) x = 2.0 * uniform01(rng) - 1.0;
  SpectralField s = forward(noise);
  const int n = g.dim();
  for_each_mode(g, [&](const Mode& m) {
    double factor = 0.0;
    if (m.kmax != 0 && dealias_keep(g, m)) {
      double k2 = 0.0;
      for (int d = 0; d < n; ++d) k2 += static_cast<double>(m.k[d] * m.k[d]);
      factor = std::pow(k2, -0.5 * slope);
    }
    for (int d = 0; d < n; ++d) s.component(d)[m.index] *= factor;
  });
  project_in_place(s);
  Field u = inverse(s);
  scale_to_sup(u, amplitude);
  return u;
}

}  // namespace

Field leray_project(const Field& u) {
  require_vector(u, "leray_project");
  SpectralField s = forward(u);
  project_in_place(s);
  return inverse(s);
}

Field divergence(const Field& u) {
  require_vector(u, "divergence");
  const Grid& g = u.grid();
  const SpectralField s = forward(u);
  SpectralField out(g, 0);
  auto o = out.component(0);
  for_each_mode(g, [&](const Mode& m) {
    cplx acc = 0.0;
    for (int d = 0; d < g.dim(); ++d) acc += I * m.xi_odd[d] * s.component(d)[m.index];
    o[m.index] = acc;
  });
  return inverse(out);
}

Field gradient(const Field& phi) {
  if (phi.rank() != 0) throw RankError("gradient expects a scalar field");
  const Grid& g = phi.grid();
  const SpectralField s = forward(phi);
  SpectralField out(g, 1);
  auto in = s.component(0);
  for_each_mode(g, [&](const Mode& m) {
    for (int d = 0; d < g.dim(); ++d) out.component(d)[m.index] = I * m.xi_odd[d] * in[m.index];
  });
  return inverse(out);
}

double relative_divergence(const Field& u) {
  return divergence(u).max_abs() / (1.0 + u.sup_norm());
}

InitialDataKind InitialDataSpec::parse_kind(const std::string& s) {
  if (s == "taylor-green" || s == "taylor_green") return InitialDataKind::taylor_green;
  if (s == "gaussian-vortex" || s == "gaussian_vortex") return InitialDataKind::gaussian_vortex;
  if (s == "random-solenoidal" || s == "random_solenoidal") return InitialDataKind::random_solenoidal;
  throw UnsupportedSpec("unknown initial data type '" + s + "'");
}

std::string InitialDataSpec::kind_name(InitialDataKind k) {
  switch (k) {
    case InitialDataKind::taylor_green: return "taylor-green";
    case InitialDataKind::gaussian_vortex: return "gaussian-vortex";
    case InitialDataKind::random_solenoidal: return "random-solenoidal";
  }
  return "unknown";
}

Field generate_initial_data(const Grid& g, const InitialDataSpec& spec) {
  if (!(spec.amplitude >= 0.0) || !std::isfinite(spec.amplitude))
    throw DomainError("initial data amplitude must be finite and non-negative");
  switch (spec.kind) {
    case InitialDataKind::taylor_green: return taylor_green(g, spec.amplitude);
    case InitialDataKind::gaussian_vortex: return gaussian_vortex(g, spec.amplitude, spec.width);
    case InitialDataKind::random_solenoidal:
      return random_solenoidal(g, spec.amplitude, spec.seed, spec.spectral_slope);
  }
  throw UnsupportedSpec("unknown initial data type");
}

}  // namespace mildns

#include "mildns/duhamel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "mildns/errors.hpp"
#include "mildns/field_ops.hpp"
#include "mildns/spectral.hpp"

namespace mildns {

namespace {

using cplx = std::complex<double>;
constexpr cplx I{0.0, 1.0};

// phi1(z) = (1 - e^{-z}) / z.
double phi1(double z) {
  if (z == 0.0) return 1.0;
  return -std::expm1(-z) / z;
}

// psi(z) = (1 - e^{-z}(1 + z)) / z^2, by its Taylor series near 0 where the
// closed form cancels.
double psi(double z) {
  if (z < 0.5) {
    double term = 1.0, sum = 0.0;
    // Coefficient of z^{k-2} is (-1)^k (k-1)/k!.
    for (int k = 2; k < 30; ++k) {
      term /= k;
      const double c = (k % 2 == 0 ? 1.0 : -1.0) * (k - 1) * term;
      sum += c * std::pow(z, k - 2);
    }
    return sum;
  }
  return (1.0 - std::exp(-z) * (1.0 + z)) / (z * z);
}

void require_same_lattice(const Trajectory& a, const Trajectory& b) {
  if (!(a.grid() == b.grid())) throw ValidationError("trajectories live on different grids");
  if (a.times() != b.times()) throw ValidationError("trajectories have different time lattices");
}

// Vector spectrum of P div w for the flat component layout j*n + k.
std::vector<cplx> forcing_from_spectrum(const Grid& g, const std::vector<const cplx*>& w, bool dealias) {
  const int n = g.dim();
  const std::size_t S = g.spectral_size();
  std::vector<cplx> d(static_cast<std::size_t>(n) * S, 0.0);
  for_each_mode(g, [&](const Mode& m) {
    if (m.xi_odd2 == 0.0) return;
    if (dealias && !dealias_keep(g, m)) return;
    cplx v[4];
    for (int j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (int k = 0; k < n; ++k) s += m.xi_odd[k] * w[static_cast<std::size_t>(j * n + k)][m.index];
      v[j] = I * s;
    }
    cplx dot = 0.0;
    for (int j = 0; j < n; ++j) dot += m.xi_odd[j] * v[j];
    dot /= m.xi_odd2;
    for (int j = 0; j < n; ++j) d[static_cast<std::size_t>(j) * S + m.index] = v[j] - m.xi_odd[j] * dot;
  });
  return d;
}

std::vector<cplx> forcing_from_tensor(const Field& w) {
  if (w.rank() != 2) throw RankError("duhamel integrand must be a rank-2 tensor field");
  const SpectralField s = forward(w);
  std::vector<const cplx*> ptr;
  for (std::size_t c = 0; c < s.components(); ++c) ptr.push_back(s.component(c).data());
  return forcing_from_spectrum(w.grid(), ptr, false);
}

std::vector<cplx> forcing_from_product(const Field& u, const Field& v) {
  const Grid& g = u.grid();
  const int n = g.dim();
  const std::size_t m = g.size();
  const std::size_t S = g.spectral_size();
  std::vector<cplx> spec(static_cast<std::size_t>(n * n) * S);
  std::vector<double> prod(m);
  std::vector<const cplx*> ptr;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      auto uj = u.component(static_cast<std::size_t>(j));
      auto vk = v.component(static_cast<std::size_t>(k));
      for (std::size_t i = 0; i < m; ++i) prod[i] = uj[i] * vk[i];
      cplx* out = spec.data() + static_cast<std::size_t>(j * n + k) * S;
      forward_component(g, prod.data(), out);
      ptr.push_back(out);
    }
  return forcing_from_spectrum(g, ptr, true);
}

Field field_from_spectrum(const Grid& g, const std::vector<cplx>& acc) {
  SpectralField s(g, 1);
  std::copy(acc.begin(), acc.end(), s.data().begin());
  return inverse(s);
}

// Running value of the exact integral, advanced one linear piece at a time:
// acc <- e^{-h|xi|^2} acc + h psi(z) d_a + h (phi1(z) - psi(z)) d_b, z = h|xi|^2.
class ExactIntegrator {
public:
  explicit ExactIntegrator(const Grid& g)
      : g_(g), n_(static_cast<std::size_t>(g.dim())), S_(g.spectral_size()), acc_(n_ * S_, 0.0),
        decay_(S_), wa_(S_), wb_(S_) {}

  void step(double h, const std::vector<cplx>& da, const std::vector<cplx>& db) {
    if (h != cached_h_) {
      for_each_mode(g_, [&](const Mode& m) {
        const double z = h * m.xi2;
        const double ps = psi(z);
        decay_[m.index] = std::exp(-z);
        wa_[m.index] = h * ps;
        wb_[m.index] = h * (phi1(z) - ps);
      });
      cached_h_ = h;
    }
    for (std::size_t c = 0; c < n_; ++c) {
      cplx* a = acc_.data() + c * S_;
      const cplx* x = da.data() + c * S_;
      const cplx* y = db.data() + c * S_;
      for (std::size_t i = 0; i < S_; ++i) a[i] = decay_[i] * a[i] + wa_[i] * x[i] + wb_[i] * y[i];
    }
  }

  const std::vector<cplx>& value() const noexcept { return acc_; }

private:
  Grid g_;
  std::size_t n_;
  std::size_t S_;
  std::vector<cplx> acc_;
  std::vector<double> decay_, wa_, wb_;
  double cached_h_ = -1.0;
};

// Integrates up to node `last` (inclusive) and optionally a partial piece of
// length `extra` beyond it; forcing(j) supplies the spectrum at node j.
template <class Forcing>
std::vector<Field> integrate(const Trajectory& w, std::size_t last, double extra, bool all_nodes, Forcing&& forcing) {
  const Grid& g = w.grid();
  ExactIntegrator integ(g);
  std::vector<Field> out;
  std::vector<cplx> da = forcing(0);
  // Before the first node the integrand is frozen at its first value.
  if (w.time(0) > 0.0) integ.step(w.time(0), da, da);
  if (all_nodes) out.push_back(field_from_spectrum(g, integ.value()));
  for (std::size_t j = 0; j < last; ++j) {
    std::vector<cplx> db = forcing(j + 1);
    integ.step(w.time(j + 1) - w.time(j), da, db);
    if (all_nodes) out.push_back(field_from_spectrum(g, integ.value()));
    da = std::move(db);
  }
  if (extra > 0.0) {
    const std::vector<cplx> next = forcing(last + 1);
    const double frac = extra / (w.time(last + 1) - w.time(last));
    std::vector<cplx> db(da.size());
    for (std::size_t i = 0; i < db.size(); ++i) db[i] = da[i] + frac * (next[i] - da[i]);
    integ.step(extra, da, db);
  }
  if (!all_nodes) out.push_back(field_from_spectrum(g, integ.value()));
  return out;
}

// Resolves a query time into (node, partial length beyond it).
std::pair<std::size_t, double> locate(const Trajectory& w, double t, bool interpolate) {
  if (!(t >= 0.0)) throw DomainError("duhamel time must be non-negative");
  const std::size_t j = w.find_node(t);
  if (j < w.size()) return {j, 0.0};
  if (t > w.horizon()) throw RangeError("time lies beyond the trajectory");
  if (!interpolate) throw RangeError("time is not a node of the trajectory");
  if (t < w.time(0)) throw RangeError("time lies before the first node");
  std::size_t a = 0;
  while (a + 1 < w.size() && w.time(a + 1) < t) ++a;
  return {a, t - w.time(a)};
}

}  // namespace

Trajectory::Trajectory(const Grid& g, std::vector<double> times, std::vector<Field> fields, bool divergence_free)
    : grid_(g), times_(std::move(times)), fields_(std::move(fields)) {
  if (times_.empty()) throw DomainError("trajectory needs at least one node");
  if (times_.size() != fields_.size()) throw ValidationError("trajectory times and fields differ in length");
  if (!(times_.front() >= 0.0)) throw DomainError("trajectory times must be non-negative");
  for (std::size_t j = 1; j < times_.size(); ++j)
    if (!(times_[j] > times_[j - 1])) throw DomainError("trajectory times must be strictly increasing");
  for (const Field& f : fields_) {
    if (!(f.grid() == grid_)) throw ValidationError("trajectory fields must share one grid");
    if (f.rank() != fields_.front().rank()) throw ValidationError("trajectory fields must share one rank");
  }
  if (divergence_free) mark_divergence_free();
}

Trajectory Trajectory::uniform(const Grid& g, double T, std::size_t J, int rank) {
  if (!(T > 0.0) || J == 0) throw DomainError("uniform lattice needs T > 0 and J >= 1");
  std::vector<double> times(J + 1);
  for (std::size_t j = 0; j <= J; ++j) times[j] = T * static_cast<double>(j) / static_cast<double>(J);
  std::vector<Field> fields(J + 1, Field(g, rank));
  return Trajectory(g, std::move(times), std::move(fields));
}

void Trajectory::mark_divergence_free() {
  if (rank() != 1) throw RankError("only vector trajectories can be divergence free");
  for (std::size_t j = 0; j < fields_.size(); ++j) {
    const double div = divergence(fields_[j]).max_abs();
    if (div > 1e-8 * (1.0 + fields_[j].sup_norm()))
      throw InputError("trajectory node " + std::to_string(j) + " is not divergence free");
  }
  divergence_free_ = true;
}

std::size_t Trajectory::find_node(double t) const noexcept {
  for (std::size_t j = 0; j < times_.size(); ++j)
    if (std::abs(times_[j] - t) <= 1e-12 * std::max(1.0, std::abs(t))) return j;
  return times_.size();
}

double Trajectory::sup_sup() const {
  double m = 0.0;
  for (const Field& f : fields_) m = std::max(m, f.sup_norm());
  return m;
}

double sup_distance(const Trajectory& a, const Trajectory& b) {
  require_same_lattice(a, b);
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, (a.field(j) - b.field(j)).sup_norm());
  return m;
}

Trajectory operator+(const Trajectory& a, const Trajectory& b) {
  require_same_lattice(a, b);
  std::vector<Field> f;
  for (std::size_t j = 0; j < a.size(); ++j) f.push_back(a.field(j) + b.field(j));
  return Trajectory(a.grid(), a.times(), std::move(f));
}

Trajectory operator-(const Trajectory& a, const Trajectory& b) {
  require_same_lattice(a, b);
  std::vector<Field> f;
  for (std::size_t j = 0; j < a.size(); ++j) f.push_back(a.field(j) - b.field(j));
  return Trajectory(a.grid(), a.times(), std::move(f));
}

Trajectory operator*(double s, const Trajectory& a) {
  std::vector<Field> f;
  for (std::size_t j = 0; j < a.size(); ++j) f.push_back(s * a.field(j));
  return Trajectory(a.grid(), a.times(), std::move(f));
}

Field apply_heat(const Field& f, double t) {
  if (!(t >= 0.0)) throw DomainError("heat time must be non-negative");
  if (t == 0.0) return f;
  SpectralField s = forward(f);
  const Grid& g = f.grid();
  for_each_mode(g, [&](const Mode& m) {
    const double e = std::exp(-t * m.xi2);
    for (std::size_t c = 0; c < s.components(); ++c) s.component(c)[m.index] *= e;
  });
  return inverse(s);
}

Trajectory heat_trajectory(const Field& f, const std::vector<double>& times) {
  const Grid& g = f.grid();
  const SpectralField s = forward(f);
  std::vector<Field> out;
  for (double t : times) {
    if (!(t >= 0.0)) throw DomainError("heat time must be non-negative");
    if (t == 0.0) {
      out.push_back(f);
      continue;
    }
    SpectralField st = s;
    for_each_mode(g, [&](const Mode& m) {
      const double e = std::exp(-t * m.xi2);
      for (std::size_t c = 0; c < st.components(); ++c) st.component(c)[m.index] *= e;
    });
    out.push_back(inverse(st));
  }
  return Trajectory(g, times, std::move(out));
}

Field tensor_product(const Field& u, const Field& v, bool dealias) {
  if (u.rank() != 1 || v.rank() != 1) throw RankError("tensor product expects vector fields");
  if (!(u.grid() == v.grid())) throw ValidationError("tensor product of fields on different grids");
  const Grid& g = u.grid();
  const std::size_t n = static_cast<std::size_t>(g.dim());
  Field w(g, 2);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      auto out = w.component(j * n + k);
      auto uj = u.component(j);
      auto vk = v.component(k);
      for (std::size_t i = 0; i < g.size(); ++i) out[i] = uj[i] * vk[i];
    }
  if (!dealias) return w;
  SpectralField s = forward(w);
  for_each_mode(g, [&](const Mode& m) {
    if (dealias_keep(g, m)) return;
    for (std::size_t c = 0; c < s.components(); ++c) s.component(c)[m.index] = 0.0;
  });
  return inverse(s);
}

Trajectory duhamel_A(const Trajectory& w) {
  auto out = integrate(w, w.size() - 1, 0.0, true, [&](std::size_t j) { return forcing_from_tensor(w.field(j)); });
  return Trajectory(w.grid(), w.times(), std::move(out));
}

Field duhamel_A(const Trajectory& w, double t, bool interpolate) {
  const auto [node, extra] = locate(w, t, interpolate);
  auto out = integrate(w, node, extra, false, [&](std::size_t j) { return forcing_from_tensor(w.field(j)); });
  return std::move(out.front());
}

Trajectory bilinear_B(const Trajectory& u, const Trajectory& v) {
  require_same_lattice(u, v);
  if (u.rank() != 1 || v.rank() != 1) throw RankError("bilinear map expects vector trajectories");
  auto out = integrate(u, u.size() - 1, 0.0, true,
                       [&](std::size_t j) { return forcing_from_product(u.field(j), v.field(j)); });
  return Trajectory(u.grid(), u.times(), std::move(out));
}

Field bilinear_B(const Trajectory& u, const Trajectory& v, double t) {
  require_same_lattice(u, v);
  if (u.rank() != 1 || v.rank() != 1) throw RankError("bilinear map expects vector trajectories");
  const auto [node, extra] = locate(u, t, true);
  auto out = integrate(u, node, extra, false,
                       [&](std::size_t j) { return forcing_from_product(u.field(j), v.field(j)); });
  return std::move(out.front());
}

Trajectory shift(const Trajectory& traj, std::size_t j0) {
  if (j0 >= traj.size()) throw RangeError("shift node beyond the trajectory");
  std::vector<double> times;
  std::vector<Field> fields;
  const double t0 = traj.time(j0);
  for (std::size_t j = j0; j < traj.size(); ++j) {
    times.push_back(j == j0 ? 0.0 : traj.time(j) - t0);
    fields.push_back(traj.field(j));
  }
  return Trajectory(traj.grid(), std::move(times), std::move(fields));
}

void PathSpec::validate() const {
  if (family == PathFamily::L) {
    if (!alpha.is_infinite() && !(alpha.value() > 1.0)) throw IndexError("time exponent alpha must exceed 1");
    if (alpha.is_infinite() && !beta.is_infinite()) throw IndexError("alpha = inf requires beta = inf");
    if (!beta.is_infinite() && !(beta.value() >= 1.0)) throw IndexError("time exponent beta must be at least 1");
  } else if (!std::isfinite(sigma)) {
    throw IndexError("time weight exponent must be finite");
  }
}

std::vector<double> node_norms(const Trajectory& traj, const LorentzIndex& idx) {
  std::vector<double> out;
  for (std::size_t j = 0; j < traj.size(); ++j)
    if (traj.time(j) > 0.0) out.push_back(lorentz_value(traj.field(j), idx));
  return out;
}

PathNorm path_norm(const Trajectory& traj, const PathSpec& spec) {
  spec.validate();
  const std::vector<double> vals = node_norms(traj, spec.index);
  std::vector<double> times;
  for (double t : traj.times())
    if (t > 0.0) times.push_back(t);
  if (spec.family != PathFamily::L) {
    double best = 0.0;
    for (std::size_t j = 0; j < vals.size(); ++j) {
      const double w = std::pow(times[j], -0.5 * spec.sigma);
      if (!std::isfinite(w)) return {std::numeric_limits<double>::infinity(), true};
      best = std::max(best, w * vals[j]);
    }
    return {best, false};
  }
  std::vector<double> widths(vals.size());
  for (std::size_t j = 0; j < vals.size(); ++j) widths[j] = times[j] - (j == 0 ? 0.0 : times[j - 1]);
  const Rearrangement r = Rearrangement::from_steps(vals, widths);
  return {lorentz_quasinorm(r, LorentzIndex(spec.alpha, spec.beta)), false};
}

}  // namespace mildns

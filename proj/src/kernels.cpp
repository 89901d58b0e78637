#include "mildns/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <sstream>

#include "mildns/errors.hpp"
#include "mildns/spectral.hpp"

namespace mildns {

namespace {

using cplx = std::complex<double>;

void require_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("kernel time must be positive and finite");
}

// Flattened description of one sampled component.
struct Component {
  int i = 0;
  int j = 0;
  std::vector<int> ks;
};

std::vector<int> expand_alpha(const std::vector<int>& alpha) {
  std::vector<int> ks;
  for (std::size_t d = 0; d < alpha.size(); ++d)
    for (int r = 0; r < alpha[d]; ++r) ks.push_back(static_cast<int>(d));
  return ks;
}

std::vector<Component> enumerate_components(const MultiplierSpec& spec, int n) {
  std::vector<std::vector<int>> derivs;
  if (!spec.alpha.empty()) {
    derivs.push_back(expand_alpha(spec.alpha));
  } else {
    const int m = spec.order;
    std::size_t count = 1;
    for (int r = 0; r < m; ++r) count *= static_cast<std::size_t>(n);
    for (std::size_t c = 0; c < count; ++c) {
      std::vector<int> ks(static_cast<std::size_t>(m));
      std::size_t rem = c;
      for (int r = m - 1; r >= 0; --r) {
        ks[static_cast<std::size_t>(r)] = static_cast<int>(rem % static_cast<std::size_t>(n));
        rem /= static_cast<std::size_t>(n);
      }
      derivs.push_back(ks);
    }
  }
  std::vector<Component> out;
  const int tensor = spec.tag == KernelTag::oseen ? n : 1;
  for (int i = 0; i < tensor; ++i)
    for (int j = 0; j < tensor; ++j)
      for (const auto& ks : derivs) out.push_back({i, j, ks});
  return out;
}

// Fourier coefficients (already divided by the box volume) of one component.
void fill_component(const MultiplierSpec& spec, double t, const Grid& g, const Component& comp, cplx* out) {
  const double inv_vol = 1.0 / g.volume();
  const bool oseen = spec.tag == KernelTag::oseen;
  const int m = static_cast<int>(comp.ks.size());
  cplx unit = 1.0;
  for (int r = 0; r < m; ++r) unit *= cplx(0.0, 1.0);
  for_each_mode(g, [&](const Mode& md) {
    double sym = std::exp(-t * md.xi2) * inv_vol;
    if (oseen) {
      double h = comp.i == comp.j ? 1.0 : 0.0;
      if (md.xi_odd2 > 0.0) h -= md.xi_odd[comp.i] * md.xi_odd[comp.j] / md.xi_odd2;
      sym *= h;
    }
    for (int k : comp.ks) sym *= md.xi_odd[k];
    out[md.index] = unit * sym;
  });
}

void sample_component(const MultiplierSpec& spec, double t, const Grid& g, const Component& comp,
                      std::vector<cplx>& coeffs, double* out) {
  fill_component(spec, t, g, comp, coeffs.data());
  inverse_component(g, coeffs.data(), out);
}

double weight_exponent(const MultiplierSpec& spec, int n) { return n + spec.derivative_order(); }

// Cholesky solve of A p = b for a small symmetric matrix; false if A is not
// positive definite.
bool cholesky_solve(double A[4][4], const double* b, double* p, int n) {
  double L[4][4] = {};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      double s = A[i][j];
      for (int k = 0; k < j; ++k) s -= L[i][k] * L[j][k];
      if (i == j) {
        if (!(s > 0.0)) return false;
        L[i][i] = std::sqrt(s);
      } else {
        L[i][j] = s / L[j][j];
      }
    }
  double y[4];
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= L[i][k] * y[k];
    y[i] = s / L[i][i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = y[i];
    for (int k = i + 1; k < n; ++k) s -= L[k][i] * p[k];
    p[i] = s / L[i][i];
  }
  return true;
}

// Trust-region Newton ascent with central-difference derivatives. Steps that
// leave the admissible region are rejected. Returns the final value.
template <class F, class In>
double ascend(F&& f, In&& inside, double* x, int n, double h) {
  const double s = 1e-3 * h;
  double fx = f(x);
  double radius = h;
  for (int it = 0; it < 200 && radius > 1e-9 * h; ++it) {
    double grad[4], H[4][4];
    double y[4];
    for (int d = 0; d < n; ++d) {
      std::copy(x, x + n, y);
      y[d] = x[d] + s;
      const double fp = f(y);
      y[d] = x[d] - s;
      const double fm = f(y);
      grad[d] = (fp - fm) / (2.0 * s);
      H[d][d] = (fp - 2.0 * fx + fm) / (s * s);
    }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double v[4];
        int k = 0;
        for (double si : {1.0, -1.0})
          for (double sj : {1.0, -1.0}) {
            std::copy(x, x + n, y);
            y[i] += si * s;
            y[j] += sj * s;
            v[k++] = f(y);
          }
        H[i][j] = H[j][i] = (v[0] - v[1] - v[2] + v[3]) / (4.0 * s * s);
      }
    double scale = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(H[i][j]));
    double mu = 0.0, p[4];
    for (int attempt = 0; attempt < 60; ++attempt) {
      double A[4][4];
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A[i][j] = (i == j ? mu : 0.0) - H[i][j];
      if (cholesky_solve(A, grad, p, n)) break;
      mu = mu == 0.0 ? 1e-6 * scale + 1e-300 : 4.0 * mu;
    }
    double len = 0.0;
    for (int d = 0; d < n; ++d) len += p[d] * p[d];
    len = std::sqrt(len);
    if (len > radius) {
      for (int d = 0; d < n; ++d) p[d] *= radius / len;
      len = radius;
    }
    for (int d = 0; d < n; ++d) y[d] = x[d] + p[d];
    const double fy = inside(y) ? f(y) : -std::numeric_limits<double>::infinity();
    if (fy > fx) {
      std::copy(y, y + n, x);
      fx = fy;
      if (len >= 0.99 * radius) radius = std::min(2.0 * radius, 4.0 * h);
      if (len < 1e-9 * h) break;
    } else {
      radius = 0.25 * std::min(radius, len);
    }
  }
  return fx;
}

// Trigonometric interpolant of a set of kernel components.
class SpectralInterpolant {
public:
  SpectralInterpolant(const MultiplierSpec& spec, double t, const Grid& g) : g_(g) {
    const auto comps = enumerate_components(spec, g.dim());
    ncomp_ = comps.size();
    std::vector<std::vector<cplx>> all(ncomp_, std::vector<cplx>(g.spectral_size()));
    for (std::size_t c = 0; c < ncomp_; ++c) fill_component(spec, t, g, comps[c], all[c].data());
    double top = 0.0;
    for (const auto& v : all)
      for (const auto& z : v) top = std::max(top, std::abs(z));
    for_each_mode(g, [&](const Mode& md) {
      double mag = 0.0;
      for (std::size_t c = 0; c < ncomp_; ++c) mag = std::max(mag, std::abs(all[c][md.index]));
      if (mag <= 1e-22 * top) return;
      ModeEntry e;
      e.weight = md.weight;
      for (int d = 0; d < g.dim(); ++d) e.k[d] = md.k[d];
      modes_.push_back(e);
      for (std::size_t c = 0; c < ncomp_; ++c) coeffs_.push_back(all[c][md.index]);
    });
  }

  // Frobenius magnitude at a physical point.
  double magnitude(const double* x) const {
    const int n = g_.dim();
    const long N = static_cast<long>(g_.points_per_axis());
    std::vector<std::vector<cplx>> phase(static_cast<std::size_t>(n), std::vector<cplx>(static_cast<std::size_t>(N + 1)));
    for (int d = 0; d < n; ++d)
      for (long k = -N / 2; k <= N / 2; ++k) {
        const double a = 2.0 * M_PI * static_cast<double>(k) * x[d] / g_.length();
        phase[static_cast<std::size_t>(d)][static_cast<std::size_t>(k + N / 2)] = {std::cos(a), std::sin(a)};
      }
    std::vector<double> acc(ncomp_, 0.0);
    for (std::size_t e = 0; e < modes_.size(); ++e) {
      cplx ph = 1.0;
      for (int d = 0; d < n; ++d) ph *= phase[static_cast<std::size_t>(d)][static_cast<std::size_t>(modes_[e].k[d] + N / 2)];
      const cplx* c = &coeffs_[e * ncomp_];
      for (std::size_t q = 0; q < ncomp_; ++q) acc[q] += modes_[e].weight * (c[q] * ph).real();
    }
    double s = 0.0;
    for (double v : acc) s += v * v;
    return std::sqrt(s);
  }

private:
  struct ModeEntry {
    long k[4];
    double weight;
  };
  Grid g_;
  std::size_t ncomp_;
  std::vector<ModeEntry> modes_;
  std::vector<cplx> coeffs_;
};

}  // namespace

MultiplierSpec MultiplierSpec::with_alpha(KernelTag tag, std::vector<int> alpha) {
  MultiplierSpec s;
  s.tag = tag;
  s.order = std::accumulate(alpha.begin(), alpha.end(), 0);
  s.alpha = std::move(alpha);
  return s;
}

int MultiplierSpec::derivative_order() const {
  if (alpha.empty()) return order;
  return std::accumulate(alpha.begin(), alpha.end(), 0);
}

int MultiplierSpec::output_rank() const {
  return (tag == KernelTag::oseen ? 2 : 0) + (alpha.empty() ? order : 0);
}

std::size_t MultiplierSpec::components(int n) const { return component_count(n, output_rank()); }

void MultiplierSpec::validate(int n) const {
  if (order < 0) throw DomainError("derivative order must be non-negative");
  if (!alpha.empty()) {
    if (static_cast<int>(alpha.size()) != n) throw DomainError("multi-index length must equal the dimension");
    for (int a : alpha)
      if (a < 0) throw DomainError("multi-index entries must be non-negative");
  }
  if (derivative_order() > 2) throw DomainError("derivative order is capped at 2");
  if (output_rank() > 4) throw RankError("kernel output rank too large");
}

std::string MultiplierSpec::alpha_label() const {
  std::ostringstream os;
  if (alpha.empty()) {
    os << "grad" << order;
  } else {
    for (std::size_t d = 0; d < alpha.size(); ++d) os << (d ? ":" : "") << alpha[d];
  }
  return os.str();
}

std::string MultiplierSpec::label() const {
  return std::string(tag == KernelTag::heat ? "heat" : "oseen") + "/" + alpha_label();
}

double heat_kernel(double t, const double* x, int n) {
  require_time(t);
  double r2 = 0.0;
  for (int d = 0; d < n; ++d) r2 += x[d] * x[d];
  return std::pow(4.0 * M_PI * t, -0.5 * n) * std::exp(-r2 / (4.0 * t));
}

KernelProfile kernel_grid(const MultiplierSpec& spec, double t, const Grid& g, const KernelOptions& opt) {
  require_time(t);
  spec.validate(g.dim());
  KernelProfile prof{spec, t, Field(g, spec.output_rank()), 0.0, {}, false};
  prof.small_box = g.length() < 10.0 * std::sqrt(t);
  if (prof.small_box && opt.strict)
    throw DomainError("box length below 10 sqrt(t); kernel profile is dominated by periodic images");
  const auto comps = enumerate_components(spec, g.dim());
  std::vector<cplx> coeffs(g.spectral_size());
  for (std::size_t c = 0; c < comps.size(); ++c)
    sample_component(spec, t, g, comps[c], coeffs, prof.values.component(c).data());
  prof.values.require_finite();
  double l1 = 0.0;
  for (double x : prof.values.magnitude()) l1 += x;
  prof.l1_norm = l1 * g.cell_measure();
  return prof;
}

Field kernel_magnitude(const MultiplierSpec& spec, double t, const Grid& g) {
  require_time(t);
  spec.validate(g.dim());
  Field acc(g, 0);
  auto a = acc.component(0);
  std::vector<cplx> coeffs(g.spectral_size());
  std::vector<double> buf(g.size());
  for (const auto& comp : enumerate_components(spec, g.dim())) {
    // The Oseen tensor is symmetric in (i, j): sample i <= j once.
    double w = 1.0;
    if (spec.tag == KernelTag::oseen) {
      if (comp.i > comp.j) continue;
      if (comp.i < comp.j) w = 2.0;
    }
    sample_component(spec, t, g, comp, coeffs, buf.data());
    for (std::size_t i = 0; i < buf.size(); ++i) a[i] += w * buf[i] * buf[i];
  }
  for (auto& x : a) x = std::sqrt(x);
  acc.require_finite();
  return acc;
}

DecayReport pointwise_decay_constant(const MultiplierSpec& spec, const std::vector<double>& t_samples,
                                     const Grid& g, double radius_fraction) {
  if (t_samples.size() < 2) throw DomainError("decay constant needs at least two time samples");
  const auto [tmin, tmax] = std::minmax_element(t_samples.begin(), t_samples.end());
  if (*tmax < 10.0 * *tmin * (1.0 - 1e-12)) throw DomainError("time samples must span a decade");
  const int n = g.dim();
  const double expo = weight_exponent(spec, n);
  const double cap = radius_fraction * g.length();
  DecayReport rep{};
  for (double t : t_samples) {
    require_time(t);
    const Field mag = kernel_magnitude(spec, t, g);
    auto weighted = [&](const double* x) {
      double r2 = 0.0;
      for (int d = 0; d < n; ++d) r2 += x[d] * x[d];
      return std::pow(t, 0.5 * expo) * std::pow(1.0 + std::sqrt(r2 / t), expo);
    };
    // Grid candidates, best first, thinned so that refinements start from
    // distinct parts of the (often ring-shaped) ridge of maxima.
    std::vector<std::pair<double, std::size_t>> cand;
    std::size_t idx[4];
    double x[4];
    for (std::size_t node = 0; node < g.size(); ++node) {
      g.unravel(node, idx);
      double r2 = 0.0;
      for (int d = 0; d < n; ++d) {
        x[d] = g.centered(idx[d]);
        r2 += x[d] * x[d];
      }
      if (std::sqrt(r2) > cap) continue;
      const double v = mag.at(0, node);
      if (!std::isfinite(v)) throw NumericError("non-finite kernel sample");
      cand.emplace_back(v * weighted(x), node);
    }
    std::sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) {
      return a.first > b.first || (a.first == b.first && a.second < b.second);
    });
    const double h = g.spacing();
    std::vector<std::size_t> starts;
    for (const auto& [v, node] : cand) {
      if (starts.size() >= 12 || v < 0.99 * cand.front().first) break;
      bool separate = true;
      for (std::size_t s : starts)
        if (g.periodic_distance(s, node) < 3.0 * h) separate = false;
      if (separate) starts.push_back(node);
    }
    const SpectralInterpolant interp(spec, t, g);
    auto value_at = [&](const double* y) { return interp.magnitude(y) * weighted(y); };
    auto inside = [&](const double* y) {
      double r2 = 0.0;
      for (int d = 0; d < n; ++d) r2 += y[d] * y[d];
      return std::sqrt(r2) <= cap;
    };
    double best = 0.0;
    for (std::size_t node : starts) {
      g.unravel(node, idx);
      for (int d = 0; d < n; ++d) x[d] = g.centered(idx[d]);
      best = std::max(best, ascend(value_at, inside, x, n, h));
      double r = 0.0;
      for (int d = 0; d < n; ++d) r += x[d] * x[d];
      r = std::sqrt(r);
      if (r > cap - 2.0 * h && r > 0.0) {
        // Maximum pressed against the search radius: refine on the sphere.
        auto on_sphere = [&](const double* z) {
          double zr = 0.0, y[4];
          for (int d = 0; d < n; ++d) zr += z[d] * z[d];
          zr = std::sqrt(zr);
          for (int d = 0; d < n; ++d) y[d] = z[d] * cap / zr;
          return value_at(y);
        };
        for (int d = 0; d < n; ++d) x[d] *= cap / r;
        best = std::max(best, ascend(on_sphere, [](const double*) { return true; }, x, n, h));
      }
    }
    if (!std::isfinite(best)) throw NumericError("non-finite decay constant");
    rep.t.push_back(t);
    rep.per_t.push_back(best);
  }
  const auto [lo, hi] = std::minmax_element(rep.per_t.begin(), rep.per_t.end());
  rep.value = *hi;
  rep.spread = *lo > 0.0 ? *hi / *lo - 1.0 : std::numeric_limits<double>::infinity();
  return rep;
}

std::vector<double> kernel_lorentz_profile(const MultiplierSpec& spec, double t, const std::vector<double>& p_list,
                                           const Grid& unit_grid) {
  require_time(t);
  for (double p : p_list)
    if (!(p >= 1.0) || !std::isfinite(p)) throw IndexError("L^{p,1} profile requires p in [1, inf)");
  const Grid g = Grid::lattice(unit_grid.dim(), unit_grid.points_per_axis(), unit_grid.length() * std::sqrt(t));
  const Rearrangement r = decreasing_rearrangement(kernel_magnitude(spec, t, g));
  std::vector<double> out;
  out.reserve(p_list.size());
  for (double p : p_list) out.push_back(lorentz_quasinorm(r, LorentzIndex::quasi(p, 1.0)));
  return out;
}

double lorentz_scaling_exponent(const MultiplierSpec& spec, double p, double t1, double t2, const Grid& unit_grid) {
  const double a = kernel_lorentz_profile(spec, t1, {p}, unit_grid)[0];
  const double b = kernel_lorentz_profile(spec, t2, {p}, unit_grid)[0];
  return std::log(b / a) / std::log(t2 / t1);
}

double predicted_scaling_exponent(const MultiplierSpec& spec, double p, int n) {
  return -0.5 * (spec.derivative_order() + n * (1.0 - 1.0 / p));
}

double semigroup_residual(const MultiplierSpec& spec, double s, double t, const Grid& g) {
  require_time(s);
  require_time(t);
  const KernelProfile heat = kernel_grid(MultiplierSpec::heat(), s, g);
  const KernelProfile k = kernel_grid(spec, t, g);
  const KernelProfile direct = kernel_grid(spec, s + t, g);
  std::vector<cplx> hs(g.spectral_size()), ks(g.spectral_size());
  forward_component(g, heat.values.component(0).data(), hs.data());
  std::vector<double> conv(g.size());
  const double scale = g.cell_measure() / static_cast<double>(g.size());
  double worst = 0.0;
  for (std::size_t c = 0; c < k.values.components(); ++c) {
    forward_component(g, k.values.component(c).data(), ks.data());
    for (std::size_t i = 0; i < ks.size(); ++i) ks[i] *= hs[i];
    inverse_component(g, ks.data(), conv.data());
    const auto ref = direct.values.component(c);
    for (std::size_t i = 0; i < conv.size(); ++i) worst = std::max(worst, std::abs(conv[i] * scale - ref[i]));
  }
  return worst;
}

double kernel_l1_difference(const MultiplierSpec& spec, double t1, double t2, const Grid& g) {
  Field a = kernel_grid(spec, t1, g).values;
  a -= kernel_grid(spec, t2, g).values;
  double s = 0.0;
  for (double x : a.magnitude()) s += x;
  return s * g.cell_measure();
}

}  // namespace mildns

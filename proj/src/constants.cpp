#include "mildns/constants.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include "mildns/errors.hpp"
#include "mildns/grid.hpp"
#include "mildns/kernels.hpp"

namespace mildns {

namespace {

constexpr double kCoarseL = 40.0;
constexpr std::size_t kCoarseN = 256;
constexpr double kFineL = 60.0;
constexpr std::size_t kFineN = 384;
constexpr int kAlphaPoints = 64;

// Far field of |grad T|_F is kappa / |x|^{n+1}; its integral outside the ball
// of radius R is n omega_n kappa / R.
double far_field_tail(int n, double R) {
  if (n == 2) return 4.0 / R;
  if (n == 3) return 3.0 * std::sqrt(10.0) / R;
  throw UnsupportedSpec("grad T quadrature is implemented for n = 2, 3");
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

double beta_constant(double n_over_r) {
  if (!(n_over_r >= 0.0)) throw DomainError("n/r must be non-negative");
  if (n_over_r >= 1.0) throw DivergentIntegralError("beta integral diverges for n/r >= 1");
  return boost::math::beta(0.5, 1.0 - n_over_r);
}

double oseen_gradient_l1(int n, double t, double L, std::size_t N) {
  if (!(t > 0.0)) throw DomainError("time must be positive");
  const double R = 0.25 * L;
  const double tail = far_field_tail(n, R);
  const Grid g = Grid::lattice(n, N, L);
  const Field mag = kernel_magnitude(MultiplierSpec::oseen(1), t, g);
  std::size_t idx[4];
  double sum = 0.0;
  for (std::size_t node = 0; node < g.size(); ++node) {
    g.unravel(node, idx);
    double r2 = 0.0;
    for (int d = 0; d < n; ++d) r2 += g.centered(idx[d]) * g.centered(idx[d]);
    if (r2 <= R * R) sum += mag.at(0, node);
  }
  return sum * g.cell_measure() + tail;
}

GammaResult gamma_constant(int n) {
  static std::mutex mu;
  static std::map<int, GammaResult> memo;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
  }
  if (n != 2 && n != 3) throw UnsupportedSpec("gamma is implemented for n = 2, 3");
  GammaResult res{};
  res.coarse = oseen_gradient_l1(n, 1.0, kCoarseL, kCoarseN);
  res.fine = oseen_gradient_l1(n, 1.0, kFineL, kFineN);
  res.gap = std::abs(res.coarse - res.fine) / res.fine;
  res.value = res.fine;
  if (!(res.gap <= 0.01))
    throw ConvergenceError("grad T quadrature disagrees between lattices", {res.coarse, res.fine});
  std::lock_guard<std::mutex> lock(mu);
  memo.emplace(n, res);
  return res;
}

double heat_lorentz_p1(int n, double p) {
  if (n < 1) throw DomainError("dimension must be positive");
  if (!(p >= 1.0)) throw IndexError("p must be at least 1");
  const double omega = unit_ball_volume(n);
  const double peak = std::pow(4.0 * M_PI, -0.5 * n);
  const double s = 1.0 / p;
  boost::math::quadrature::exp_sinh<double> integrator;
  // ||f||*_{p,1} = (1/p) int tau^{1/p - 1} f*(tau) d tau.
  auto f = [&](double tau) {
    return s * std::pow(tau, s - 1.0) * peak * std::exp(-0.25 * std::pow(tau / omega, 2.0 / n));
  };
  return integrator.integrate(f, 1e-12);
}

double alpha_constant(int n) {
  if (n < 1) throw DomainError("dimension must be positive");
  // 1/p ranges over ((n-1)/n, 1].
  const double lo = static_cast<double>(n - 1) / n;
  double best = 0.0;
  for (int i = 0; i <= kAlphaPoints; ++i) {
    const double s = lo + (1.0 - lo) * static_cast<double>(i) / kAlphaPoints;
    if (s <= 0.0) continue;
    best = std::max(best, heat_lorentz_p1(n, 1.0 / s));
  }
  return best;
}

ConstantsTable eta_table(int n, const std::vector<Exponent>& r_list) {
  for (const Exponent& r : r_list)
    if (!r.is_infinite() && !(r.value() > n))
      throw SubcriticalityError("r = " + r.token() + " is not above the dimension");
  ConstantsTable tab;
  tab.n = n;
  tab.gamma_detail = gamma_constant(n);
  tab.gamma = tab.gamma_detail.value;
  tab.alpha = alpha_constant(n);
  for (const Exponent& r : r_list) {
    ConstantsRow row{};
    row.r = r;
    const double x = n * r.reciprocal();
    row.r_conj = r.is_infinite() ? 1.0 : r.conjugate();
    row.beta = beta_constant(x);
    row.delta = row.beta * tab.gamma;
    row.eta = row.r_conj * tab.alpha * row.delta;
    row.divergent = x > 0.999;
    tab.rows.push_back(row);
  }
  tab.provenance = {
      {"gamma_lattices", "L=" + fmt(kCoarseL) + ",N=" + std::to_string(kCoarseN) + "; L=" + fmt(kFineL) +
                             ",N=" + std::to_string(kFineN)},
      {"gamma_method", "lattice sum over |x| <= L/4 plus analytic far-field tail"},
      {"gamma_coarse", fmt(tab.gamma_detail.coarse)},
      {"gamma_fine", fmt(tab.gamma_detail.fine)},
      {"gamma_gap", fmt(tab.gamma_detail.gap)},
      {"alpha_method", "exp-sinh quadrature of the radial rearrangement, tol 1e-12"},
      {"alpha_p_grid", std::to_string(kAlphaPoints + 1) + " points uniform in 1/p"},
      {"beta_method", "boost::math::beta(1/2, 1 - n/r)"},
  };
  return tab;
}

const ConstantsRow& table_row(const ConstantsTable& table, const Exponent& r) {
  for (const ConstantsRow& row : table.rows)
    if (row.r.is_infinite() == r.is_infinite() && (r.is_infinite() || row.r.value() == r.value())) return row;
  throw RangeError("r = " + r.token() + " is not in the constants table");
}

}  // namespace mildns

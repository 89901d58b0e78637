#include "mildns/regularity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "mildns/errors.hpp"

namespace mildns {

namespace {

// Integer offsets o != 0 with |o| h <= cap, one of each +-o pair.
std::vector<std::array<long, 4>> half_ball_offsets(const Grid& g, double cap) {
  const int n = g.dim();
  const double h = g.spacing();
  const long m = static_cast<long>(std::floor(cap / h + 1e-9));
  std::vector<std::array<long, 4>> out;
  std::array<long, 4> o{0, 0, 0, 0};
  for (int d = 0; d < n; ++d) o[d] = -m;
  while (true) {
    long r2 = 0;
    for (int d = 0; d < n; ++d) r2 += o[d] * o[d];
    // Lexicographically positive offsets only.
    bool positive = false;
    for (int d = 0; d < n; ++d)
      if (o[d] != 0) {
        positive = o[d] > 0;
        break;
      }
    if (positive && std::sqrt(static_cast<double>(r2)) * h <= cap * (1.0 + 1e-12)) out.push_back(o);
    int d = n - 1;
    while (d >= 0 && ++o[d] > m) {
      o[d] = -m;
      --d;
    }
    if (d < 0) break;
  }
  return out;
}

}  // namespace

double holder_quotient(const Field& u, double alpha, double radius_cap) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("Hoelder exponent must lie in (0, 1)");
  const Grid& g = u.grid();
  if (!(radius_cap >= g.spacing() * (1.0 - 1e-12))) throw DomainError("radius cap must be at least one spacing");
  const int n = g.dim();
  const long N = static_cast<long>(g.points_per_axis());
  const double h = g.spacing();
  const auto offsets = half_ball_offsets(g, std::min(radius_cap, 0.5 * g.length()));
  std::size_t idx[4];
  double best = 0.0;
  for (const auto& o : offsets) {
    double r2 = 0.0;
    for (int d = 0; d < n; ++d) r2 += static_cast<double>(o[d] * o[d]);
    const double scale = 1.0 / std::pow(std::sqrt(r2) * h, alpha);
    for (std::size_t node = 0; node < g.size(); ++node) {
      g.unravel(node, idx);
      std::size_t other = 0;
      for (int d = 0; d < n; ++d) {
        const long k = ((static_cast<long>(idx[d]) + o[d]) % N + N) % N;
        other = other * static_cast<std::size_t>(N) + static_cast<std::size_t>(k);
      }
      double diff2 = 0.0;
      for (std::size_t c = 0; c < u.components(); ++c) {
        const double dv = u.at(c, node) - u.at(c, other);
        diff2 += dv * dv;
      }
      best = std::max(best, std::sqrt(diff2) * scale);
    }
  }
  return best;
}

double holder_bound_bracket(const Trajectory& traj, std::size_t t0_node, std::size_t t_node, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("Hoelder exponent must lie in (0, 1)");
  if (t_node >= traj.size()) throw RangeError("node beyond the trajectory");
  if (t0_node >= t_node) throw DomainError("reference node must precede the evaluation node");
  const double t = traj.time(t_node);
  const double t0 = traj.time(t0_node);
  double value = traj.field(t0_node).sup_norm() / std::pow(t - t0, 0.5 * alpha);
  // Integral of (t - s)^{-(1+alpha)/2} over (a, b) is ((t-a)^k - (t-b)^k)/k, k = (1-alpha)/2.
  const double k = 0.5 * (1.0 - alpha);
  for (std::size_t j = t0_node; j < t_node; ++j) {
    const double a = traj.time(j), b = traj.time(j + 1);
    const double sa = traj.field(j).sup_norm(), sb = traj.field(j + 1).sup_norm();
    const double mean = 0.5 * (sa * sa + sb * sb);
    value += mean * (std::pow(t - a, k) - std::pow(t - b, k)) / k;
  }
  return value;
}

std::vector<double> continuity_modulus(const Trajectory& traj, const LorentzIndex& idx) {
  if (traj.size() < 3) throw InsufficientDataError("continuity modulus needs at least three nodes");
  std::vector<double> gaps;
  for (std::size_t j = 0; j + 1 < traj.size(); ++j)
    gaps.push_back(lorentz_value(traj.field(j + 1) - traj.field(j), idx));
  return gaps;
}

double initial_gap(const Trajectory& traj, const LorentzIndex& idx) {
  if (traj.size() < 2 || traj.time(0) != 0.0) throw InsufficientDataError("trajectory must start at t = 0");
  return lorentz_value(traj.field(1) - traj.field(0), idx);
}

RegularityReport regularity_report(const Trajectory& traj, const std::vector<double>& alphas,
                                   const std::vector<LorentzIndex>& indices, double radius_fraction) {
  RegularityReport rep;
  rep.indices = indices;
  const double cap = radius_fraction * traj.grid().length();
  for (std::size_t j = 1; j < traj.size(); ++j) {
    if (!(traj.time(j) > 0.0)) continue;
    for (double a : alphas) {
      HolderRow row{};
      row.t = traj.time(j);
      row.alpha = a;
      row.quotient = holder_quotient(traj.field(j), a, cap);
      row.bracket = holder_bound_bracket(traj, j / 2, j, a);
      row.ratio = row.bracket > 0.0 ? row.quotient / row.bracket : 0.0;
      rep.rows.push_back(row);
    }
  }
  for (const LorentzIndex& idx : indices) rep.gaps.push_back(continuity_modulus(traj, idx));
  return rep;
}

double ratio_spread(const RegularityReport& rep, double alpha, double t_lo, double t_hi) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const HolderRow& row : rep.rows) {
    if (row.alpha != alpha || row.t < t_lo || row.t > t_hi) continue;
    lo = std::min(lo, row.ratio);
    hi = std::max(hi, row.ratio);
  }
  if (!(lo > 0.0) || !std::isfinite(lo)) throw InsufficientDataError("no positive ratios in the window");
  return hi / lo;
}

}  // namespace mildns

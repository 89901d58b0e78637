#include "mildns/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "mildns/errors.hpp"

namespace mildns {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// t^a - (t - width)^a for a != 0, t > 0, accurate when width << t.
double pow_diff(double t, double width, double a) {
  if (width >= t) return std::pow(t, a);
  return std::pow(t, a) * -std::expm1(a * std::log1p(-width / t));
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(15);
  os << v;
  return os.str();
}

}  // namespace

Exponent Exponent::finite(double v) {
  if (!(v >= 1.0) || !std::isfinite(v)) throw IndexError("exponent must lie in [1, inf), got " + format_number(v));
  return Exponent(Kind::finite, v);
}

Exponent Exponent::parse(const std::string& s) {
  if (s == "inf" || s == "infinity") return inf();
  if (s == "infbar") return infbar();
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw IndexError("cannot parse exponent '" + s + "'");
  }
  if (pos != s.size()) throw IndexError("cannot parse exponent '" + s + "'");
  if (std::isinf(v)) return inf();
  return finite(v);
}

double Exponent::value() const noexcept { return kind_ == Kind::finite ? v_ : kInf; }

double Exponent::reciprocal() const noexcept { return kind_ == Kind::finite ? 1.0 / v_ : 0.0; }

double Exponent::conjugate() const noexcept {
  if (kind_ != Kind::finite) return 1.0;
  if (v_ == 1.0) return kInf;
  return v_ / (v_ - 1.0);
}

std::string Exponent::token() const {
  switch (kind_) {
    case Kind::infinity: return "inf";
    case Kind::infbar: return "infbar";
    case Kind::finite: break;
  }
  return format_number(v_);
}

LorentzIndex::LorentzIndex(Exponent p, Exponent q, Variant v) : p_(p), q_(q), v_(v) {
  if (q.kind() == Exponent::Kind::infbar) q_ = Exponent::inf();
  if (p.is_infinite() && !q_.is_infinite())
    throw IndexError("infinite p requires q = inf");
  if (v == Variant::norm && !p.is_infinite() && p.value() <= 1.0)
    throw IndexError("the f** norm requires p > 1");
}

LorentzIndex LorentzIndex::quasi(double p, double q) {
  return LorentzIndex(std::isinf(p) ? Exponent::inf() : Exponent::finite(p),
                      std::isinf(q) ? Exponent::inf() : Exponent::finite(q));
}

std::string LorentzIndex::label() const {
  std::string s = "L" + p_.token() + "_" + q_.token();
  if (is_norm()) s += "_norm";
  return s;
}

Rearrangement Rearrangement::from_steps(std::span<const double> values, std::span<const double> widths) {
  if (values.size() != widths.size()) throw DomainError("step values and widths differ in length");
  std::vector<std::size_t> order;
  order.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || values[i] < 0.0) throw NumericError("step values must be finite and non-negative");
    if (!std::isfinite(widths[i]) || widths[i] < 0.0) throw DomainError("step widths must be finite and non-negative");
    if (values[i] > 0.0 && widths[i] > 0.0) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  Rearrangement r;
  r.values_.reserve(order.size());
  r.ends_.reserve(order.size());
  r.cumulative_.reserve(order.size());
  double t = 0.0, acc = 0.0;
  for (std::size_t i : order) {
    t += widths[i];
    acc += values[i] * widths[i];
    r.values_.push_back(values[i]);
    r.ends_.push_back(t);
    r.cumulative_.push_back(acc);
  }
  return r;
}

Rearrangement Rearrangement::from_samples(std::span<const double> magnitudes, double cell_measure) {
  if (!(cell_measure > 0.0)) throw DomainError("cell measure must be positive");
  Rearrangement r;
  for (double v : magnitudes) {
    if (!std::isfinite(v)) throw NumericError("samples must be finite");
    if (v != 0.0) r.values_.push_back(std::abs(v));
  }
  std::stable_sort(r.values_.begin(), r.values_.end(), std::greater<double>());
  r.ends_.resize(r.values_.size());
  r.cumulative_.resize(r.values_.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < r.values_.size(); ++j) {
    r.ends_[j] = static_cast<double>(j + 1) * cell_measure;
    acc += r.values_[j] * cell_measure;
    r.cumulative_[j] = acc;
  }
  return r;
}

double Rearrangement::operator()(double t) const {
  if (t < 0.0) throw DomainError("rearrangement argument must be non-negative");
  const auto it = std::upper_bound(ends_.begin(), ends_.end(), t);
  if (it == ends_.end()) return 0.0;
  return values_[static_cast<std::size_t>(it - ends_.begin())];
}

double Rearrangement::integral(double t) const {
  if (t <= 0.0 || values_.empty()) return 0.0;
  if (t >= ends_.back()) return cumulative_.back();
  const std::size_t j = static_cast<std::size_t>(std::lower_bound(ends_.begin(), ends_.end(), t) - ends_.begin());
  const double before = j == 0 ? 0.0 : cumulative_[j - 1];
  return before + values_[j] * (t - start(j));
}

Rearrangement decreasing_rearrangement(const Field& f) {
  const auto mag = f.magnitude();
  return Rearrangement::from_samples(mag, f.grid().cell_measure());
}

double distribution_function(const Rearrangement& r, double y) {
  if (!(y > 0.0)) throw DomainError("distribution function level must be positive");
  const auto v = r.values();
  const auto it = std::partition_point(v.begin(), v.end(), [y](double x) { return x > y; });
  const std::size_t k = static_cast<std::size_t>(it - v.begin());
  return k == 0 ? 0.0 : r.ends()[k - 1];
}

double distribution_function(const Field& f, double y) {
  if (!(y > 0.0)) throw DomainError("distribution function level must be positive");
  std::size_t count = 0;
  for (double x : f.magnitude())
    if (x > y) ++count;
  return static_cast<double>(count) * f.grid().cell_measure();
}

double maximal_function(const Rearrangement& r, double t) {
  if (!(t > 0.0)) throw DomainError("maximal function argument must be positive");
  return r.integral(t) / t;
}

double lorentz_quasinorm(const Rearrangement& r, const LorentzIndex& idx) {
  if (r.empty()) return 0.0;
  if (idx.p().is_infinite()) return r.sup();
  const auto v = r.values();
  const auto t = r.ends();
  const double inv_p = idx.p().reciprocal();
  if (idx.q().is_infinite()) {
    double best = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) best = std::max(best, std::pow(t[j], inv_p) * v[j]);
    return best;
  }
  const double q = idx.q().value();
  const double a = q * inv_p;
  const double top = v[0];
  double sum = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double w = t[j] - r.start(j);
    sum += std::pow(v[j] / top, q) * pow_diff(t[j], w, a);
  }
  return top * std::pow(sum, 1.0 / q);
}

double lorentz_norm(const Rearrangement& r, const LorentzIndex& idx) {
  if (!idx.p().is_infinite() && idx.p().value() <= 1.0) throw IndexError("the f** norm requires p > 1");
  if (r.empty()) return 0.0;
  if (idx.p().is_infinite()) return r.sup();
  const auto v = r.values();
  const auto t = r.ends();
  const std::size_t M = v.size();
  const double inv_p = idx.p().reciprocal();
  const double p = idx.p().value();
  const double total = r.integral_to_end(M - 1);
  const double tM = t[M - 1];

  // On piece j, f**(t) = v_j + c_j / t with c_j = sum_{i<j} (v_i - v_j) w_i.
  std::vector<double> c(M, 0.0);
  for (std::size_t j = 1; j < M; ++j) c[j] = c[j - 1] + (v[j - 1] - v[j]) * t[j - 1];

  if (idx.q().is_infinite()) {
    double best = 0.0;
    for (std::size_t j = 0; j < M; ++j)
      best = std::max(best, r.integral_to_end(j) * std::pow(t[j], inv_p - 1.0));
    return best;
  }

  const double q = idx.q().value();
  if (q == 1.0) {
    const double b = inv_p - 1.0;
    double sum = 0.0;
    for (std::size_t j = 0; j < M; ++j) {
      const double w = t[j] - r.start(j);
      sum += v[j] * p * pow_diff(t[j], w, inv_p);
      if (j > 0 && c[j] != 0.0) sum += c[j] * pow_diff(t[j], w, b) / b;
    }
    sum += total * std::pow(tM, b) / -b;
    return inv_p * sum;
  }

  // General q: adaptive quadrature per piece, scaled by the sup to avoid
  // overflow in the q-th power.
  const double top = v[0];
  const double a = q * inv_p;
  double sum = std::pow(v[0] / top, q) * std::pow(t[0], a);
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  for (std::size_t j = 1; j < M; ++j) {
    const double vj = v[j] / top;
    const double cj = c[j] / top;
    auto integrand = [&](double s) { return a * std::pow(s, a - 1.0) * std::pow(vj + cj / s, q); };
    sum += GK::integrate(integrand, t[j - 1], t[j], 15, 1e-10);
  }
  sum += a * std::pow(total / top, q) * std::pow(tM, a - q) / (q - a);
  return top * std::pow(sum, 1.0 / q);
}

double lorentz_quasinorm(const Field& f, const LorentzIndex& idx) {
  return lorentz_quasinorm(decreasing_rearrangement(f), idx);
}

double lorentz_norm(const Field& f, const LorentzIndex& idx) {
  return lorentz_norm(decreasing_rearrangement(f), idx);
}

double lorentz_value(const Rearrangement& r, const LorentzIndex& idx) {
  return idx.is_norm() ? lorentz_norm(r, idx) : lorentz_quasinorm(r, idx);
}

double lorentz_value(const Field& f, const LorentzIndex& idx) {
  return lorentz_value(decreasing_rearrangement(f), idx);
}

InterpolationReport interpolation_check(const Rearrangement& r, double p0, Exponent p1, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("interpolation parameter must lie in (0, 1)");
  if (!(p0 >= 1.0) || !std::isfinite(p0)) throw DomainError("p0 must lie in [1, inf)");
  if (!p1.is_infinite() && !(p1.value() > p0)) throw DomainError("p1 must exceed p0");
  const double inv_p = (1.0 - theta) / p0 + theta * p1.reciprocal();
  const double p = 1.0 / inv_p;
  const double A = lorentz_quasinorm(r, LorentzIndex(Exponent::finite(p0), Exponent::inf()));
  const double B = lorentz_quasinorm(r, LorentzIndex(p1, Exponent::inf()));
  const double mix = std::pow(A, 1.0 - theta) * std::pow(B, theta);
  const double d = 1.0 / p0 - p1.reciprocal();
  InterpolationReport rep{};
  rep.p = p;
  rep.weak_lhs = lorentz_quasinorm(r, LorentzIndex(Exponent::finite(p), Exponent::inf()));
  rep.weak_rhs = mix;
  rep.strong_constant = 2.0 / (p * d * std::pow(theta, 1.0 - theta) * std::pow(1.0 - theta, theta));
  rep.strong_lhs = lorentz_quasinorm(r, LorentzIndex(Exponent::finite(p), Exponent::finite(1.0)));
  rep.strong_rhs = rep.strong_constant * mix;
  rep.margin = std::min(rep.weak_rhs - rep.weak_lhs, rep.strong_rhs - rep.strong_lhs);
  return rep;
}

InterpolationReport interpolation_check(const Field& f, double p0, Exponent p1, double theta) {
  return interpolation_check(decreasing_rearrangement(f), p0, p1, theta);
}

double unit_ball_volume(int n) {
  if (n < 1) throw DomainError("dimension must be positive");
  return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double lebesgue_norm(const Field& f, double p) {
  const auto mag = f.magnitude();
  if (std::isinf(p)) return *std::max_element(mag.begin(), mag.end());
  if (!(p >= 1.0)) throw DomainError("Lebesgue exponent must be at least 1");
  double top = 0.0;
  for (double x : mag) top = std::max(top, x);
  if (top == 0.0) return 0.0;
  double s = 0.0;
  for (double x : mag) s += std::pow(x / top, p);
  return top * std::pow(s * f.grid().cell_measure(), 1.0 / p);
}

}  // namespace mildns

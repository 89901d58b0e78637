#pragma once

#include <span>
#include <string>
#include <vector>

#include "mildns/grid.hpp"

namespace mildns {

// Exponent in [1, inf] plus the "infbar" variant (true supremum). On grids
// both infinite variants evaluate identically; the token is kept for labels.
class Exponent {
public:
  enum class Kind { finite, infinity, infbar };

  Exponent() = default;
  static Exponent finite(double v);
  static Exponent inf() { return Exponent(Kind::infinity, 0.0); }
  static Exponent infbar() { return Exponent(Kind::infbar, 0.0); }
  // Accepts "inf", "infbar" or a decimal number.
  static Exponent parse(const std::string& s);

  Kind kind() const noexcept { return kind_; }
  bool is_infinite() const noexcept { return kind_ != Kind::finite; }
  double value() const noexcept;
  // 1/p, zero for the infinite variants.
  double reciprocal() const noexcept;
  // Conjugate exponent p' = p/(p-1).
  double conjugate() const noexcept;
  std::string token() const;

  bool operator==(const Exponent& o) const noexcept { return kind_ == o.kind_ && v_ == o.v_; }

private:
  Exponent(Kind k, double v) : kind_(k), v_(v) {}
  Kind kind_ = Kind::finite;
  double v_ = 1.0;
};

class LorentzIndex {
public:
  enum class Variant { quasinorm, norm };

  // Validates p in [1, inf], q in [1, inf], infinite p => infinite q, and
  // p > 1 for the norm variant. Throws IndexError otherwise.
  LorentzIndex(Exponent p, Exponent q, Variant v = Variant::quasinorm);
  static LorentzIndex quasi(double p, double q);

  const Exponent& p() const noexcept { return p_; }
  const Exponent& q() const noexcept { return q_; }
  Variant variant() const noexcept { return v_; }
  bool is_norm() const noexcept { return v_ == Variant::norm; }
  // Column label such as "L2_1" or "Linfbar_inf_norm".
  std::string label() const;

private:
  Exponent p_;
  Exponent q_;
  Variant v_;
};

// Decreasing rearrangement stored as pieces: value v_j on (t_{j-1}, t_j].
class Rearrangement {
public:
  Rearrangement() = default;

  // Weighted steps in any order; zero values and zero widths are dropped.
  static Rearrangement from_steps(std::span<const double> values, std::span<const double> widths);
  // Samples |f| with uniform cell measure.
  static Rearrangement from_samples(std::span<const double> magnitudes, double cell_measure);

  std::size_t pieces() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }
  std::span<const double> values() const noexcept { return values_; }
  // Right breakpoints t_1..t_M.
  std::span<const double> ends() const noexcept { return ends_; }
  double start(std::size_t j) const noexcept { return j == 0 ? 0.0 : ends_[j - 1]; }
  double total_measure() const noexcept { return ends_.empty() ? 0.0 : ends_.back(); }
  double sup() const noexcept { return values_.empty() ? 0.0 : values_.front(); }

  // f*(t), right-continuous convention f*(t) = v_j for t in [t_{j-1}, t_j).
  double operator()(double t) const;
  // Integral of f* over (0, t).
  double integral(double t) const;
  // Integral over (0, t_j) for piece index j (t_j = ends()[j]).
  double integral_to_end(std::size_t j) const noexcept { return cumulative_[j]; }

private:
  std::vector<double> values_;
  std::vector<double> ends_;
  std::vector<double> cumulative_;
};

Rearrangement decreasing_rearrangement(const Field& f);

double distribution_function(const Rearrangement& r, double y);
double distribution_function(const Field& f, double y);

double maximal_function(const Rearrangement& r, double t);

double lorentz_quasinorm(const Rearrangement& r, const LorentzIndex& idx);
double lorentz_quasinorm(const Field& f, const LorentzIndex& idx);
double lorentz_norm(const Rearrangement& r, const LorentzIndex& idx);
double lorentz_norm(const Field& f, const LorentzIndex& idx);
// Dispatches on the index variant.
double lorentz_value(const Rearrangement& r, const LorentzIndex& idx);
double lorentz_value(const Field& f, const LorentzIndex& idx);

struct InterpolationReport {
  double p;
  double weak_lhs;
  double weak_rhs;
  double strong_lhs;
  double strong_rhs;
  double strong_constant;
  // min over both inequalities of rhs - lhs.
  double margin;
};

// Checks the interpolation bounds between L^{p0,inf} and L^{p1,inf} for the
// intermediate exponent 1/p = (1-theta)/p0 + theta/p1.
InterpolationReport interpolation_check(const Rearrangement& r, double p0, Exponent p1, double theta);
InterpolationReport interpolation_check(const Field& f, double p0, Exponent p1, double theta);

// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

// Discrete L^p norm (sum |f|^p h^n)^{1/p} of pointwise magnitudes.
double lebesgue_norm(const Field& f, double p);

}  // namespace mildns

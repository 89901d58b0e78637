#pragma once

#include <cmath>

#include <boost/math/quadrature/exp_sinh.hpp>

// Independent radial evaluation of ||grad T(1)||_{L1(R^n)} for n = 2, 3.
// With T_ij = delta_ij Phi + d_i d_j F and Delta F = -Phi, every derivative
// of F at x = r e_1 follows from the radial profile F'(r).
namespace testsupport {

struct RadialDerivs {
  double f1, f2, f3;  // F', F'', F'''
};

inline double gaussian_profile(int n, double r) {
  return std::pow(4.0 * M_PI, -0.5 * n) * std::exp(-0.25 * r * r);
}

inline RadialDerivs radial_closed(int n, double r) {
  double f1;
  if (n == 2) {
    f1 = std::expm1(-0.25 * r * r) / (2.0 * M_PI * r);
  } else {
    f1 = std::exp(-0.25 * r * r) / (4.0 * std::pow(M_PI, 1.5) * r) - std::erf(0.5 * r) / (4.0 * M_PI * r * r);
  }
  const double phi = gaussian_profile(n, r);
  const double dphi = -0.5 * r * phi;
  const double f2 = -phi - (n - 1) * f1 / r;
  const double f3 = -dphi - (n - 1) * (f2 / r - f1 / (r * r));
  return {f1, f2, f3};
}

// |grad T(1, r e_1)|_F.
inline double oseen_gradient_magnitude(int n, double r) {
  const double phi = gaussian_profile(n, r);
  const double dphi = -0.5 * r * phi;
  double a, da, db;
  if (r <= 4.0) {
    // Series forms of a = F'' - F'/r, a/r, a' and b' = (F'/r)' without division.
    const double pre = -std::pow(4.0 * M_PI, -0.5 * n);
    double fact = 1.0, a_over_r = 0.0;
    da = 0.0;
    db = 0.0;
    for (int m = 1; m < 60; ++m) {
      fact *= -0.25 / m;
      const double c = pre * fact / (n + 2 * m);
      a_over_r += c * 2 * m * std::pow(r, 2 * m - 1);
      db += c * 2 * m * std::pow(r, 2 * m - 1);
      da += c * 4.0 * m * m * std::pow(r, 2 * m - 1);
    }
    const double s111 = da + db + dphi;
    const double sjj1 = db + dphi;
    return std::sqrt(s111 * s111 + (n - 1) * sjj1 * sjj1 + 2.0 * (n - 1) * a_over_r * a_over_r);
  }
  const RadialDerivs d = radial_closed(n, r);
  a = d.f2 - d.f1 / r;
  da = d.f3 - d.f2 / r + d.f1 / (r * r);
  db = d.f2 / r - d.f1 / (r * r);
  const double s111 = da + db + dphi;
  const double sjj1 = db + dphi;
  return std::sqrt(s111 * s111 + (n - 1) * sjj1 * sjj1 + 2.0 * (n - 1) * (a / r) * (a / r));
}

inline double oseen_gradient_l1_radial(int n) {
  const double surface = n == 2 ? 2.0 * M_PI : 4.0 * M_PI;
  boost::math::quadrature::exp_sinh<double> es;
  return es.integrate([n, surface](double r) { return oseen_gradient_magnitude(n, r) * surface * std::pow(r, n - 1); },
                      1e-12);
}

}  // namespace testsupport

#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "mildns/errors.hpp"
#include "mildns/kernels.hpp"
#include "support.hpp"

using namespace mildns;

namespace {

// Brute-force maximisation of (4 pi)^{-1} e^{-y^2/4} (1+y)^2 on a fine grid
// followed by ternary refinement.
double heat_decay_oracle() {
  auto f = [](double y) { return std::exp(-y * y / 4.0) * (1.0 + y) * (1.0 + y) / (4.0 * M_PI); };
  double best_y = 0.0;
  for (int i = 0; i <= 100000; ++i) {
    const double y = 10.0 * i / 100000.0;
    if (f(y) > f(best_y)) best_y = y;
  }
  double a = best_y - 1e-4, b = best_y + 1e-4;
  for (int it = 0; it < 200; ++it) {
    const double m1 = a + (b - a) / 3, m2 = b - (b - a) / 3;
    if (f(m1) < f(m2)) a = m1; else b = m2;
  }
  return f(0.5 * (a + b));
}

// Rearrangement of the 2-D Gaussian at t = 1 is (4 pi)^{-1} exp(-(tau/pi)/4).
double heat_lp1_radial_oracle(double p) {
  boost::math::quadrature::exp_sinh<double> es;
  auto f = [p](double tau) { return (1.0 / p) * std::pow(tau, 1.0 / p - 1.0) * std::exp(-(tau / M_PI) / 4.0) / (4.0 * M_PI); };
  return es.integrate(f);
}

}  // namespace

TEST_CASE("heat kernel closed form") {
  const double origin[3] = {0, 0, 0};
  // (4 pi)^{-3/2}
  CHECK(heat_kernel(1.0, origin, 3) == doctest::Approx(0.0224483902656458).epsilon(1e-13));
  CHECK_THROWS_AS(heat_kernel(0.0, origin, 3), DomainError);
  std::mt19937_64 rng(40);
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + i % 3;
    const double t = std::exp(testsupport::uniform(rng, -3, 3));
    double x[3], y[3];
    for (int d = 0; d < n; ++d) {
      x[d] = testsupport::uniform(rng, -4, 4);
      y[d] = x[d] / std::sqrt(t);
    }
    CHECK(heat_kernel(t, x, n) == doctest::Approx(std::pow(t, -0.5 * n) * heat_kernel(1.0, y, n)).epsilon(1e-13));
  }
}

TEST_CASE("sampled heat kernel has unit mass and matches the closed form") {
  for (double t : {0.3, 2.0}) {
    const Grid g(2, 256, 40.0 * std::sqrt(t));
    const KernelProfile prof = kernel_grid(MultiplierSpec::heat(), t, g);
    double mass = 0.0;
    for (double v : prof.values.values()) mass += v * g.cell_measure();
    CHECK(std::abs(mass - 1.0) <= 1e-8);
    CHECK(std::abs(prof.l1_norm - 1.0) <= 1e-8);
  }
  const Grid g(2, 128, 20.0);
  const KernelProfile prof = kernel_grid(MultiplierSpec::heat(), 0.1, g);
  double worst = 0.0;
  for (std::size_t i = 0; i < 128; ++i)
    for (std::size_t j = 0; j < 128; ++j) {
      const double x[2] = {g.centered(i), g.centered(j)};
      worst = std::max(worst, std::abs(prof.values.at(0, i * 128 + j) - heat_kernel(0.1, x, 2)));
    }
  CHECK(worst <= 1e-10);
}

TEST_CASE("small boxes are flagged and rejected in strict mode") {
  const Grid g(2, 32, 5.0);
  CHECK(kernel_grid(MultiplierSpec::heat(), 1.0, g).small_box);
  CHECK_THROWS_AS(kernel_grid(MultiplierSpec::heat(), 1.0, g, {true}), DomainError);
  CHECK_THROWS_AS(kernel_grid(MultiplierSpec::heat(), -1.0, g), DomainError);
  CHECK_THROWS_AS(kernel_grid(MultiplierSpec::heat(3), 1.0, g), DomainError);
}

TEST_CASE("oseen trace equals (n-1) heat up to the zero-mode constant") {
  for (int n : {2, 3}) {
    const Grid g(n, n == 2 ? 128 : 32, n == 2 ? 20.0 : 16.0);
    const double t = n == 2 ? 0.5 : 1.0;
    const KernelProfile T = kernel_grid(MultiplierSpec::oseen(), t, g);
    const KernelProfile H = kernel_grid(MultiplierSpec::heat(), t, g);
    // The zero-mode symbol is the identity, so the trace symbol is n there
    // instead of n - 1: the difference is exactly 1/|box|.
    const double offset = 1.0 / g.volume();
    double worst = 0.0;
    for (std::size_t node = 0; node < g.size(); ++node) {
      double tr = 0.0;
      for (int i = 0; i < n; ++i) tr += T.values.at(static_cast<std::size_t>(i * n + i), node);
      worst = std::max(worst, std::abs(tr - (n - 1) * H.values.at(0, node) - offset));
    }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("oseen kernel is divergence free and symmetric") {
  for (int n : {2, 3}) {
    const Grid g(n, n == 2 ? 64 : 32, 16.0);
    const KernelProfile dT = kernel_grid(MultiplierSpec::oseen(1), 1.0, g);
    const std::size_t N = static_cast<std::size_t>(n);
    double worst = 0.0;
    for (std::size_t j = 0; j < N; ++j)
      for (std::size_t node = 0; node < g.size(); ++node) {
        double div = 0.0;
        for (std::size_t i = 0; i < N; ++i) div += dT.values.at((i * N + j) * N + i, node);
        worst = std::max(worst, std::abs(div));
      }
    CHECK(worst <= 1e-10);
    const KernelProfile T = kernel_grid(MultiplierSpec::oseen(), 1.0, g);
    const double scale = T.values.max_abs();
    double asym = 0.0;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j)
        for (std::size_t node = 0; node < g.size(); ++node)
          asym = std::max(asym, std::abs(T.values.at(i * N + j, node) - T.values.at(j * N + i, node)));
    CHECK(asym <= 1e-12 * scale);
  }
}

TEST_CASE("odd derivatives give odd real profiles") {
  const Grid g(2, 64, 16.0);
  const KernelProfile dT = kernel_grid(MultiplierSpec::oseen(1), 1.0, g);
  const double scale = dT.values.max_abs();
  double worst = 0.0;
  for (std::size_t c = 0; c < dT.values.components(); ++c)
    for (std::size_t i = 0; i < 64; ++i)
      for (std::size_t j = 0; j < 64; ++j) {
        const std::size_t a = i * 64 + j, b = ((64 - i) % 64) * 64 + (64 - j) % 64;
        worst = std::max(worst, std::abs(dT.values.at(c, a) + dT.values.at(c, b)));
      }
  CHECK(worst <= 1e-12 * scale);
}

TEST_CASE("multiplier spec bookkeeping") {
  CHECK(MultiplierSpec::oseen(1).components(3) == 27u);
  CHECK(MultiplierSpec::oseen(2).output_rank() == 4);
  const auto s = MultiplierSpec::with_alpha(KernelTag::heat, {1, 1});
  CHECK(s.derivative_order() == 2);
  CHECK(s.components(2) == 1u);
  CHECK(s.label() == "heat/1:1");
  CHECK_THROWS_AS(MultiplierSpec::with_alpha(KernelTag::heat, {2, 1}).validate(2), DomainError);
  CHECK_THROWS_AS(MultiplierSpec::with_alpha(KernelTag::heat, {1}).validate(2), DomainError);
}

TEST_CASE("pointwise decay constant of the heat kernel") {
  const DecayReport rep = pointwise_decay_constant(MultiplierSpec::heat(), {0.25, 1.0, 4.0}, Grid(2, 512, 80.0));
  const double oracle = heat_decay_oracle();
  for (double v : rep.per_t) CHECK(v == doctest::Approx(oracle).epsilon(1e-6));
  CHECK_THROWS_AS(pointwise_decay_constant(MultiplierSpec::heat(), {1.0}, Grid(2, 64, 20.0)), DomainError);
  CHECK_THROWS_AS(pointwise_decay_constant(MultiplierSpec::heat(), {1.0, 2.0}, Grid(2, 64, 20.0)), DomainError);
}

TEST_CASE("pointwise decay constant of grad T is finite and scale stable") {
  const DecayReport rep = pointwise_decay_constant(MultiplierSpec::oseen(1), {0.25, 1.0, 4.0}, Grid(2, 512, 80.0));
  CHECK(std::isfinite(rep.value));
  CHECK(rep.value > 0.0);
  CHECK(rep.spread <= 0.05);
}

TEST_CASE("pointwise decay constant is invariant under grid refinement") {
  const auto a = pointwise_decay_constant(MultiplierSpec::heat(), {0.5, 5.0}, Grid(2, 128, 40.0));
  const auto b = pointwise_decay_constant(MultiplierSpec::heat(), {0.5, 5.0}, Grid(2, 256, 40.0));
  CHECK(std::abs(a.value - b.value) <= 1e-6 * b.value);
  const auto c = pointwise_decay_constant(MultiplierSpec::oseen(1), {0.5, 5.0}, Grid(2, 128, 40.0));
  const auto d = pointwise_decay_constant(MultiplierSpec::oseen(1), {0.5, 5.0}, Grid(2, 256, 40.0));
  CHECK(std::abs(c.value - d.value) <= 1e-6 * d.value);
}

TEST_CASE("heat kernel L^{p,1} values") {
  const Grid unit(2, 512, 40.0);
  const auto v = kernel_lorentz_profile(MultiplierSpec::heat(), 1.0, {1.0, 2.0}, unit);
  CHECK(std::abs(v[0] - 1.0) <= 1e-8);
  const double oracle = heat_lp1_radial_oracle(2.0);
  CHECK(std::abs(v[1] - oracle) <= 1e-4 * oracle);
  CHECK_THROWS_AS(kernel_lorentz_profile(MultiplierSpec::heat(), 1.0, {INFINITY}, unit), IndexError);
}

TEST_CASE("L^{p,1} scaling exponents") {
  const Grid unit(2, 128, 20.0);
  for (double p : {1.0, 1.5, 2.0}) {
    for (const auto& spec : {MultiplierSpec::heat(), MultiplierSpec::oseen(1), MultiplierSpec::heat(2)}) {
      const double expect = predicted_scaling_exponent(spec, p, 2);
      CHECK(lorentz_scaling_exponent(spec, p, 1.0, 4.0, unit) == doctest::Approx(expect).epsilon(1e-6));
      CHECK(lorentz_scaling_exponent(spec, p, 0.1, 1.0, unit) == doctest::Approx(expect).epsilon(1e-6));
    }
  }
}

TEST_CASE("semigroup residuals") {
  const Grid g(2, 128, 20.0);
  CHECK(semigroup_residual(MultiplierSpec::heat(), 0.5, 0.5, g) <= 1e-12);
  CHECK(semigroup_residual(MultiplierSpec::oseen(1), 0.5, 0.5, g) <= 1e-10);
  CHECK(semigroup_residual(MultiplierSpec::oseen(), 1e-3, 1.0, g) <= 1e-10);
  CHECK(semigroup_residual(MultiplierSpec::oseen(2), 0.25, 0.75, g) <= 1e-10);
  CHECK(semigroup_residual(MultiplierSpec::oseen(1), 0.5, 0.5, Grid(3, 32, 12.0)) <= 1e-10);
}

TEST_CASE("grad T is L1-continuous in time with linear modulus") {
  const Grid g(2, 256, 40.0);
  const auto spec = MultiplierSpec::oseen(1);
  const double d1 = kernel_l1_difference(spec, 1.0, 1.1, g);
  const double d2 = kernel_l1_difference(spec, 1.0, 1.05, g);
  const double d3 = kernel_l1_difference(spec, 1.0, 1.025, g);
  CHECK(d2 < d1);
  CHECK(d3 < d2);
  CHECK(d2 / d1 <= 0.55);
  CHECK(d3 / d2 <= 0.55);
  // d(delta)/delta stays bounded: linear modulus.
  CHECK(d3 / 0.025 <= 1.1 * d1 / 0.1);
}

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "mildns/errors.hpp"
#include "mildns/lorentz.hpp"
#include "support.hpp"

using namespace mildns;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

Rearrangement step_data() {
  const double v[] = {1.0, 3.0};
  const double w[] = {5.0, 2.0};
  return Rearrangement::from_steps(v, w);
}

Rearrangement indicator(double m) {
  const double v[] = {1.0};
  const double w[] = {m};
  return Rearrangement::from_steps(v, w);
}

// Independent evaluation of the f** norm by numerical integration of
// t^{q/p - 1} f**(t)^q, piece by piece and with a closed-form tail.
double norm_oracle(const Rearrangement& r, double p, double q) {
  boost::math::quadrature::tanh_sinh<double> ts;
  const auto ends = r.ends();
  double sum = 0.0;
  double a = 0.0;
  for (double b : ends) {
    auto f = [&](double t) { return (q / p) * std::pow(t, q / p - 1.0) * std::pow(maximal_function(r, t), q); };
    sum += ts.integrate(f, a, b);
    a = b;
  }
  const double S = r.integral(ends.back());
  sum += (q / p) * std::pow(S, q) * std::pow(a, q / p - q) / (q - q / p);
  return std::pow(sum, 1.0 / q);
}

double brute_lp(const Field& f, double p) {
  double s = 0.0;
  for (double x : f.magnitude()) s += std::pow(x, p);
  return std::pow(s * f.grid().cell_measure(), 1.0 / p);
}

}  // namespace

TEST_CASE("exponent and index validation") {
  CHECK_THROWS_AS(Exponent::finite(0.5), IndexError);
  CHECK(Exponent::parse("inf").is_infinite());
  CHECK(Exponent::parse("infbar").kind() == Exponent::Kind::infbar);
  CHECK(Exponent::parse("2.5").value() == 2.5);
  CHECK_THROWS_AS(Exponent::parse("two"), IndexError);
  CHECK_THROWS_AS(LorentzIndex(Exponent::inf(), Exponent::finite(2)), IndexError);
  CHECK_THROWS_AS(LorentzIndex(Exponent::infbar(), Exponent::finite(1)), IndexError);
  CHECK_THROWS_AS(LorentzIndex(Exponent::finite(1), Exponent::finite(1), LorentzIndex::Variant::norm), IndexError);
  CHECK(LorentzIndex(Exponent::infbar(), Exponent::inf()).label() == "Linfbar_inf");
  CHECK(LorentzIndex(Exponent::finite(2), Exponent::finite(1), LorentzIndex::Variant::norm).label() == "L2_1_norm");
  CHECK(Exponent::finite(4).conjugate() == doctest::Approx(4.0 / 3.0));
  CHECK(Exponent::inf().conjugate() == 1.0);
}

TEST_CASE("distribution function") {
  const Grid g(2, 8, 2.0);
  Field one(g, 0);
  for (auto& x : one.values()) x = 1.0;
  CHECK(distribution_function(one, 0.5) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(distribution_function(one, 1.0) == 0.0);
  CHECK(distribution_function(one, 7.0) == 0.0);
  CHECK_THROWS_AS(distribution_function(one, 0.0), DomainError);
  const Rearrangement r = step_data();
  CHECK(distribution_function(r, 2.0) == 2.0);
  CHECK(distribution_function(r, 0.5) == 7.0);
  CHECK(distribution_function(r, 3.0) == 0.0);
}

TEST_CASE("decreasing rearrangement") {
  const Rearrangement r = step_data();
  REQUIRE(r.pieces() == 2);
  CHECK(r.values()[0] == 3.0);
  CHECK(r.ends()[0] == 2.0);
  CHECK(r.values()[1] == 1.0);
  CHECK(r.ends()[1] == 7.0);
  CHECK(r(1.0) == 3.0);
  CHECK(r(6.0) == 1.0);
  CHECK(r(8.0) == 0.0);

  const Grid g(2, 16, 1.0);
  Field ind(g, 0);
  for (std::size_t i = 0; i < 40; ++i) ind.at(0, 3 * i) = 1.0;
  const Rearrangement ri = decreasing_rearrangement(ind);
  CHECK(ri.total_measure() == doctest::Approx(40 * g.cell_measure()).epsilon(1e-15));
  CHECK(ri.sup() == 1.0);
}

TEST_CASE("rearrangement is equimeasurable and preserves Lp norms") {
  std::mt19937_64 rng(21);
  const Grid g(2, 16, 1.7);
  for (int trial = 0; trial < 20; ++trial) {
    const Field f = testsupport::random_field(g, 1, rng);
    const Rearrangement r = decreasing_rearrangement(f);
    std::size_t nonzero = 0;
    for (double x : f.magnitude())
      if (x > 0) ++nonzero;
    CHECK(r.total_measure() == doctest::Approx(nonzero * g.cell_measure()).epsilon(1e-14));
    for (double y : {0.01, 0.1, 0.3, 0.9})
      CHECK(distribution_function(r, y * r.sup()) == doctest::Approx(distribution_function(f, y * r.sup())).epsilon(1e-14));
    for (double p : {1.0, 2.0, 4.0}) {
      const double rq = lorentz_quasinorm(r, LorentzIndex::quasi(p, p));
      CHECK(std::abs(rq - brute_lp(f, p)) <= 1e-12 * brute_lp(f, p));
    }
  }
}

TEST_CASE("maximal function") {
  const Rearrangement ind = indicator(1.0);
  CHECK(maximal_function(ind, 0.5) == 1.0);
  CHECK(maximal_function(ind, 2.0) == 0.5);
  CHECK(maximal_function(Rearrangement{}, 3.0) == 0.0);
  CHECK(maximal_function(step_data(), 4.0) == 2.0);
  CHECK_THROWS_AS(maximal_function(ind, 0.0), DomainError);

  std::mt19937_64 rng(22);
  const Grid g(2, 16, 1.0);
  const Rearrangement r = decreasing_rearrangement(testsupport::random_field(g, 0, rng));
  for (double t : r.ends()) CHECK(maximal_function(r, t) >= r(t));
}

TEST_CASE("quasinorm closed forms") {
  const Rearrangement ind = indicator(1.0);
  for (auto [p, q] : {std::pair{2.0, 1.0}, {2.0, 2.0}, {3.0, kInf}, {1.5, 4.0}, {1.0, 1.0}})
    CHECK(std::abs(lorentz_quasinorm(ind, LorentzIndex::quasi(p, q)) - 1.0) <= 1e-12);
  CHECK(lorentz_quasinorm(step_data(), LorentzIndex::quasi(2.0, kInf)) == doctest::Approx(3.0 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(lorentz_quasinorm(step_data(), LorentzIndex(Exponent::infbar(), Exponent::inf())) == 3.0);
  CHECK(lorentz_quasinorm(Rearrangement{}, LorentzIndex::quasi(2, 1)) == 0.0);

  // Hand evaluation: (3 (sqrt2 - 0) + 1 (sqrt7 - sqrt2)) for p = 2, q = 1.
  const double expect = 3.0 * std::sqrt(2.0) + (std::sqrt(7.0) - std::sqrt(2.0));
  CHECK(lorentz_quasinorm(step_data(), LorentzIndex::quasi(2.0, 1.0)) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("quasinorm (p,p) equals discrete Lp norm on random fields") {
  std::mt19937_64 rng(23);
  const Grid g(2, 32, 2.5);
  for (int trial = 0; trial < 100; ++trial) {
    const Field f = testsupport::random_field(g, 1, rng);
    for (double p : {1.0, 1.5, 2.0, 3.0, 6.0}) {
      const double lhs = lorentz_quasinorm(f, LorentzIndex::quasi(p, p));
      const double rhs = brute_lp(f, p);
      CHECK(std::abs(lhs - rhs) <= 1e-10 * rhs);
    }
  }
}

TEST_CASE("norm closed forms") {
  const Rearrangement ind = indicator(1.0);
  const auto norm = LorentzIndex::Variant::norm;
  CHECK(lorentz_norm(ind, LorentzIndex(Exponent::finite(2), Exponent::inf(), norm)) == doctest::Approx(1.0).epsilon(1e-15));
  // Indicator, q = 1: (1/p)[ p + 1/(1 - 1/p) ] = 1 + 1/(p - 1) = p'.
  CHECK(lorentz_norm(ind, LorentzIndex(Exponent::finite(3), Exponent::finite(1), norm)) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(lorentz_norm(Rearrangement{}, LorentzIndex(Exponent::finite(2), Exponent::finite(2), norm)) == 0.0);
  CHECK_THROWS_AS(lorentz_norm(ind, LorentzIndex::quasi(1, 1)), IndexError);
}

TEST_CASE("norm agrees with an independent quadrature of the maximal function") {
  std::mt19937_64 rng(24);
  const Grid g(1, 16, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    const Rearrangement r = decreasing_rearrangement(testsupport::random_field(g, 0, rng));
    for (auto [p, q] : {std::pair{2.0, 1.0}, {4.0, 2.0}, {3.0, 3.5}, {1.5, 1.0}}) {
      const double got = lorentz_norm(r, LorentzIndex(Exponent::finite(p), Exponent::finite(q), LorentzIndex::Variant::norm));
      CHECK(got == doctest::Approx(norm_oracle(r, p, q)).epsilon(1e-9));
    }
  }
}

TEST_CASE("q-monotonicity on random fields") {
  std::mt19937_64 rng(25);
  const Grid g(2, 32, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Field f = testsupport::random_field(g, 0, rng);
    for (auto [p, q1, q2] : {std::tuple{2.0, 1.0, 2.0}, {2.0, 2.0, kInf}, {4.0, 1.0, kInf}}) {
      const double a = lorentz_quasinorm(f, LorentzIndex::quasi(p, q1));
      const double b = lorentz_quasinorm(f, LorentzIndex::quasi(p, q2));
      CHECK(b <= a + 1e-10 * (1.0 + a));
    }
  }
}

TEST_CASE("norm sandwich on random fields") {
  std::mt19937_64 rng(26);
  const Grid g(2, 32, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Field f = testsupport::random_field(g, 1, rng);
    const Rearrangement r = decreasing_rearrangement(f);
    for (auto [p, q] : {std::pair{2.0, 1.0}, {2.0, kInf}, {4.0, 2.0}}) {
      const Exponent qe = std::isinf(q) ? Exponent::inf() : Exponent::finite(q);
      const double star = lorentz_quasinorm(r, LorentzIndex(Exponent::finite(p), qe));
      const double full = lorentz_norm(r, LorentzIndex(Exponent::finite(p), qe, LorentzIndex::Variant::norm));
      const double pc = p / (p - 1.0);
      CHECK(star <= full * (1.0 + 1e-10));
      CHECK(full <= pc * star * (1.0 + 1e-10));
    }
  }
}

TEST_CASE("support embedding constant is bounded and stable") {
  const double p1 = 2.0, p2 = 4.0;
  const double bound = p2 / (p2 - p1);
  double worst[2] = {0.0, 0.0};
  int k = 0;
  for (std::size_t N : {32u, 64u}) {
    std::mt19937_64 rng(27);
    const Grid g(2, N, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
      const Field f = testsupport::random_field(g, 0, rng, testsupport::uniform(rng, 0.1, 0.9));
      const Rearrangement r = decreasing_rearrangement(f);
      const double m = r.total_measure();
      const double lhs = lorentz_quasinorm(r, LorentzIndex::quasi(p1, 1));
      const double rhs = std::pow(m, 1 / p1 - 1 / p2) * lorentz_quasinorm(r, LorentzIndex::quasi(p2, kInf));
      worst[k] = std::max(worst[k], lhs / rhs);
    }
    ++k;
  }
  CHECK(worst[0] <= bound);
  CHECK(worst[1] <= bound);
  CHECK(std::abs(worst[0] - worst[1]) <= 0.05 * worst[1]);
}

TEST_CASE("product inequality at breakpoints") {
  std::mt19937_64 rng(28);
  const Grid g(2, 16, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Field f = testsupport::random_field(g, 0, rng);
    const Field h = testsupport::random_field(g, 0, rng);
    Field fh(g, 0);
    for (std::size_t i = 0; i < g.size(); ++i) fh.at(0, i) = f.at(0, i) * h.at(0, i);
    const Rearrangement rf = decreasing_rearrangement(f), rh = decreasing_rearrangement(h),
                        rp = decreasing_rearrangement(fh);
    std::vector<double> ts;
    for (const Rearrangement* r : {&rf, &rh, &rp})
      for (double t : r->ends()) ts.push_back(t);
    for (double t : ts) {
      const double lhs = rp(t);
      const double rhs = maximal_function(rf, t) * maximal_function(rh, t);
      CHECK(lhs <= rhs + 1e-10);
    }
  }
}

TEST_CASE("convolution inequality with circular convolution") {
  std::mt19937_64 rng(29);
  const Grid g(2, 16, 1.0);
  const std::size_t N = 16;
  for (int trial = 0; trial < 100; ++trial) {
    const Field f = testsupport::random_field(g, 0, rng);
    const Field h = testsupport::random_field(g, 0, rng);
    Field conv(g, 0);
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) {
        double s = 0.0;
        for (std::size_t a = 0; a < N; ++a)
          for (std::size_t b = 0; b < N; ++b)
            s += f.at(0, a * N + b) * h.at(0, ((i + N - a) % N) * N + (j + N - b) % N);
        conv.at(0, i * N + j) = s * g.cell_measure();
      }
    double l1 = 0.0;
    for (double x : f.values()) l1 += std::abs(x) * g.cell_measure();
    const Rearrangement rc = decreasing_rearrangement(conv), rh = decreasing_rearrangement(h);
    for (double t : {1e-3, 0.01, 0.05, 0.2, 0.5, 1.0, 2.0})
      CHECK(maximal_function(rc, t) <= l1 * maximal_function(rh, t) + 1e-10);
  }
}

TEST_CASE("rearrangement inequality") {
  std::mt19937_64 rng(30);
  const Grid g(2, 32, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Field f = testsupport::random_field(g, 0, rng);
    const Field h = testsupport::random_field(g, 0, rng);
    double lhs = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) lhs += std::abs(f.at(0, i) * h.at(0, i)) * g.cell_measure();
    // Both rearrangements share the uniform breakpoints, so the integral of
    // f* g* is a sorted dot product.
    const Rearrangement rf = decreasing_rearrangement(f), rh = decreasing_rearrangement(h);
    double rhs = 0.0;
    const std::size_t m = std::min(rf.pieces(), rh.pieces());
    for (std::size_t j = 0; j < m; ++j) rhs += rf.values()[j] * rh.values()[j] * g.cell_measure();
    CHECK(lhs <= rhs * (1.0 + 1e-12) + 1e-10);
  }
}

TEST_CASE("interpolation check") {
  const Rearrangement ind = indicator(1.0);
  for (auto [p0, p1, th] : {std::tuple{1.0, 4.0, 0.3}, {2.0, 8.0, 0.5}, {1.5, 3.0, 0.9}}) {
    const auto rep = interpolation_check(ind, p0, Exponent::finite(p1), th);
    CHECK(rep.weak_lhs == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rep.weak_rhs == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rep.margin >= -1e-12);
  }
  const auto zero = interpolation_check(Rearrangement{}, 2.0, Exponent::inf(), 0.5);
  CHECK(zero.margin == 0.0);
  CHECK_THROWS_AS(interpolation_check(ind, 2.0, Exponent::inf(), 0.0), DomainError);
  CHECK_THROWS_AS(interpolation_check(ind, 2.0, Exponent::inf(), 1.0), DomainError);

  std::mt19937_64 rng(31);
  const Grid g(2, 32, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto rep = interpolation_check(testsupport::random_field(g, 1, rng), 2.0, Exponent::inf(), 0.5);
    CHECK(rep.p == doctest::Approx(4.0));
    CHECK(rep.margin >= -1e-10);
  }
}

TEST_CASE("unit ball volume") {
  CHECK(unit_ball_volume(1) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(unit_ball_volume(2) == doctest::Approx(M_PI).epsilon(1e-15));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-15));
}

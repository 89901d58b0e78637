#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "mildns/constants.hpp"
#include "mildns/duhamel.hpp"
#include "mildns/solver.hpp"
#include "support.hpp"

using namespace mildns;

namespace {

constexpr double kT = 0.5;
constexpr std::size_t kJ = 16;
constexpr double kInf = std::numeric_limits<double>::infinity();

const ConstantsTable& table2() {
  static const ConstantsTable tab =
      eta_table(2, {Exponent::inf(), Exponent::finite(4.0), Exponent::finite(6.0)});
  return tab;
}

// Divergence-free trajectory with independent random nodes; the t = 0 node
// repeats t_1 so that the interpolated integrand stays inside the path norm.
Trajectory random_trajectory(const Grid& g, std::mt19937_64& rng) {
  Trajectory tr = Trajectory::uniform(g, kT, kJ);
  for (std::size_t j = 1; j < tr.size(); ++j)
    tr.field(j) = testsupport::random_solenoidal(g, rng(), testsupport::uniform(rng, 0.2, 2.0),
                                                 testsupport::uniform(rng, 1.0, 3.0));
  tr.field(0) = tr.field(1);
  tr.mark_divergence_free();
  return tr;
}

LorentzIndex weak(double r) {
  return std::isinf(r) ? LorentzIndex(Exponent::infbar(), Exponent::inf())
                       : LorentzIndex(Exponent::finite(r), Exponent::inf());
}

Exponent exponent(double r) { return std::isinf(r) ? Exponent::inf() : Exponent::finite(r); }

}  // namespace

TEST_CASE("bilinear estimate in the weighted sup norm") {
  const Grid g(2, 32, 2.0 * M_PI);
  std::mt19937_64 rng(81);
  int violations = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Trajectory u = random_trajectory(g, rng);
    const Trajectory v = random_trajectory(g, rng);
    const Trajectory B = bilinear_B(u, v);
    for (double r : {kInf, 4.0}) {
      const Exponent re = exponent(r);
      const double delta = table_row(table2(), re).delta;
      const double lhs = weighted_sup(B, re);
      const double rhs = delta * std::pow(kT, 0.5 * (1.0 - 2.0 / r)) * weighted_sup(u, re) * weighted_sup(v, re);
      worst = std::max(worst, lhs / rhs);
      if (lhs > rhs) ++violations;
    }
  }
  CHECK(violations == 0);
  CHECK(worst < 1.0);
}

TEST_CASE("heat estimates") {
  const Grid g(2, 32, 2.0 * M_PI);
  std::mt19937_64 rng(82);
  const double alpha = table2().alpha;
  int violations = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const Field f = testsupport::random_solenoidal(g, rng(), testsupport::uniform(rng, 0.2, 2.0),
                                                   testsupport::uniform(rng, 0.5, 3.0));
    std::vector<double> times;
    for (std::size_t j = 0; j <= kJ; ++j) times.push_back(kT * static_cast<double>(j) / kJ);
    const Trajectory S = heat_trajectory(f, times);
    for (auto [p, q] : {std::pair{2.0, 1.0}, std::pair{2.0, 2.0}, std::pair{4.0, 2.0}, std::pair{3.0, kInf}}) {
      const LorentzIndex idx(Exponent::finite(p), exponent(q), LorentzIndex::Variant::norm);
      const double lhs = path_norm(S, PathSpec::J(0.0, idx)).value;
      if (lhs > lorentz_norm(f, idx) * (1.0 + 1e-10)) ++violations;
    }
    for (double r : {kInf, 4.0, 6.0}) {
      const double rc = std::isinf(r) ? 1.0 : r / (r - 1.0);
      const double lhs = weighted_sup(S, exponent(r));
      if (lhs > rc * alpha * lorentz_quasinorm(f, weak(r)) * (1.0 + 1e-10)) ++violations;
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("product estimate in weak Lorentz path norms") {
  const Grid g(2, 32, 2.0 * M_PI);
  std::mt19937_64 rng(83);
  int violations = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const Trajectory u = random_trajectory(g, rng);
    const Trajectory v = random_trajectory(g, rng);
    Trajectory w = Trajectory::uniform(g, kT, kJ, 2);
    for (std::size_t j = 0; j < w.size(); ++j) w.field(j) = tensor_product(u.field(j), v.field(j), false);
    for (double r : {4.0, 6.0, kInf}) {
      const double sigma = -2.0 / r + testsupport::uniform(rng, -0.5, 0.5);
      const LorentzIndex half = weak(r / 2.0);
      const LorentzIndex full(exponent(r), Exponent::inf(), LorentzIndex::Variant::norm);
      const double lhs = path_norm(w, PathSpec::K(2.0 * sigma, half)).value;
      const double rhs = path_norm(u, PathSpec::K(sigma, full)).value * path_norm(v, PathSpec::K(sigma, full)).value;
      if (lhs > rhs * (1.0 + 1e-10)) ++violations;
    }
  }
  CHECK(violations == 0);
}

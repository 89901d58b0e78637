#include <doctest.h>

#include <cmath>

#include "mildns/constants.hpp"
#include "radial_oseen.hpp"

using namespace mildns;

TEST_CASE("gamma for n = 3: two lattices agree and match the radial integral") {
  const GammaResult g = gamma_constant(3);
  CHECK(g.gap <= 0.01);
  const double oracle = testsupport::oseen_gradient_l1_radial(3);
  CHECK(std::abs(g.value - oracle) <= 5e-3 * oracle);
  const ConstantsTable tab = eta_table(3, {Exponent::inf(), Exponent::finite(6.0)});
  for (const ConstantsRow& row : tab.rows) CHECK(row.eta == row.r_conj * tab.alpha * row.delta);
}

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "mildns/lorentz.hpp"

namespace mildns {

// Integral of (1-s)^{-1/2} s^{-x} over (0, 1), i.e. B(1/2, 1 - x), for x in [0, 1).
double beta_constant(double n_over_r);

struct GammaResult {
  double value;
  // L1 norms of grad T(1) on the (40, 256) and (60, 384) lattices.
  double coarse;
  double fine;
  // |coarse - fine| / fine.
  double gap;
};

// L1 norm of grad T(t) over R^n from a periodic lattice of side L with N
// points: lattice sum over |x| <= L/4 plus the exact far-field tail.
double oseen_gradient_l1(int n, double t, double L, std::size_t N);

// L1 norm of grad T(1) for n in {2, 3}; throws ConvergenceError when the
// two lattices disagree by more than 1%. Memoized per n.
GammaResult gamma_constant(int n);

// ||Phi(1)||*_{L^{p,1}} from the exact radial rearrangement.
double heat_lorentz_p1(int n, double p);

// Sup of heat_lorentz_p1 over p in [1, n/(n-1)), on 64 points uniform in 1/p
// plus the open endpoint.
double alpha_constant(int n);

struct ConstantsRow {
  Exponent r;
  // Conjugate exponent r' (1 for r = inf).
  double r_conj;
  double beta;
  double delta;
  double eta;
  // n/r > 0.999: beta and eta are near the pole.
  bool divergent;
};

struct ConstantsTable {
  int n;
  double alpha;
  double gamma;
  GammaResult gamma_detail;
  std::vector<ConstantsRow> rows;
  std::map<std::string, std::string> provenance;
};

// delta = beta gamma and eta = r' alpha delta per row. r <= n throws
// SubcriticalityError.
ConstantsTable eta_table(int n, const std::vector<Exponent>& r_list);

// Row lookup by exponent; throws RangeError when absent.
const ConstantsRow& table_row(const ConstantsTable& table, const Exponent& r);

}  // namespace mildns

#pragma once

#include <vector>

#include "mildns/duhamel.hpp"
#include "mildns/lorentz.hpp"

namespace mildns {

// Max of |u(x) - u(y)| / |x - y|^alpha over node pairs with
// 0 < |x - y| <= radius_cap (periodic distance).
double holder_quotient(const Field& u, double alpha, double radius_cap);

// ||u(t0)||_inf / (t - t0)^{alpha/2} + integral over (t0, t) of
// ||u(s)||_inf^2 / (t - s)^{(1+alpha)/2} ds. The squared sup norm is averaged
// per sub-interval and the singular factor integrated exactly.
double holder_bound_bracket(const Trajectory& traj, std::size_t t0_node, std::size_t t_node, double alpha);

// ||u(t_{j+1}) - u(t_j)|| per gap. Needs at least three nodes.
std::vector<double> continuity_modulus(const Trajectory& traj, const LorentzIndex& idx);

// ||u(t_1) - u(0)|| for a trajectory whose first node is t = 0.
double initial_gap(const Trajectory& traj, const LorentzIndex& idx);

struct HolderRow {
  double t;
  double alpha;
  double quotient;
  // Bracket with reference node floor(j/2).
  double bracket;
  double ratio;
};

struct RegularityReport {
  std::vector<HolderRow> rows;
  std::vector<LorentzIndex> indices;
  // gaps[k][j]: continuity gap between nodes j and j+1 for indices[k].
  std::vector<std::vector<double>> gaps;
};

// Hoelder rows for every node t_j > 0 and alpha, plus continuity gaps.
// radius_fraction sets the pair cap as a fraction of L (default L/8).
RegularityReport regularity_report(const Trajectory& traj, const std::vector<double>& alphas,
                                   const std::vector<LorentzIndex>& indices, double radius_fraction = 0.125);

// max/min of the ratio column for one alpha over rows with t in [t_lo, t_hi].
double ratio_spread(const RegularityReport& rep, double alpha, double t_lo, double t_hi);

}  // namespace mildns

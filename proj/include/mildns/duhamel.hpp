#pragma once

#include <cstddef>
#include <vector>

#include "mildns/grid.hpp"
#include "mildns/lorentz.hpp"

namespace mildns {

// Fields sampled at strictly increasing times 0 <= t_0 < t_1 < ... on one grid.
// A node at t = 0 holds the initial datum; path norms only look at t > 0.
class Trajectory {
public:
  Trajectory(const Grid& g, std::vector<double> times, std::vector<Field> fields, bool divergence_free = false);
  // Nodes 0, T/J, ..., T (J + 1 nodes) filled with zero fields of the given rank.
  static Trajectory uniform(const Grid& g, double T, std::size_t J, int rank = 1);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return times_.size(); }
  const std::vector<double>& times() const noexcept { return times_; }
  double time(std::size_t j) const { return times_.at(j); }
  double horizon() const noexcept { return times_.back(); }
  const Field& field(std::size_t j) const { return fields_.at(j); }
  Field& field(std::size_t j) { return fields_.at(j); }
  const std::vector<Field>& fields() const noexcept { return fields_; }
  int rank() const noexcept { return fields_.front().rank(); }
  bool divergence_free() const noexcept { return divergence_free_; }

  // Tags the trajectory after checking max |div u| <= 1e-8 (1 + sup) at every node.
  void mark_divergence_free();
  // Index of the node at time t (relative tolerance 1e-12), or size() if none.
  std::size_t find_node(double t) const noexcept;
  // Largest sup norm over nodes (sup-sup norm).
  double sup_sup() const;

private:
  Grid grid_;
  std::vector<double> times_;
  std::vector<Field> fields_;
  bool divergence_free_ = false;
};

// Max over nodes of the sup norm of a - b (same lattice required).
double sup_distance(const Trajectory& a, const Trajectory& b);
Trajectory operator+(const Trajectory& a, const Trajectory& b);
Trajectory operator-(const Trajectory& a, const Trajectory& b);
Trajectory operator*(double s, const Trajectory& a);

// Heat semigroup e^{t Delta} applied spectrally; t = 0 returns f.
Field apply_heat(const Field& f, double t);
// e^{t Delta} f at every time of the lattice.
Trajectory heat_trajectory(const Field& f, const std::vector<double>& times);

// Pointwise tensor product u_j v_k. With dealias set, modes beyond the 2/3
// cut are removed from the product.
Field tensor_product(const Field& u, const Field& v, bool dealias = true);

// Integral from 0 to t of e^{(t-s) Delta} P div w(s) ds for a rank-2
// trajectory w, piecewise linear in s between nodes and integrated exactly
// per Fourier mode. Values at every node.
Trajectory duhamel_A(const Trajectory& w);
// Same at a single time. A time between nodes requires interpolate = true.
Field duhamel_A(const Trajectory& w, double t, bool interpolate = false);

// B[u, v] = A[u (x) v] with the dealiased product, at every node.
Trajectory bilinear_B(const Trajectory& u, const Trajectory& v);
Field bilinear_B(const Trajectory& u, const Trajectory& v, double t);

// Trajectory restricted to nodes at or after node j0, with times shifted so
// that node j0 sits at t = 0.
Trajectory shift(const Trajectory& traj, std::size_t j0);

enum class PathFamily { J, K, L };

struct PathSpec {
  PathFamily family = PathFamily::J;
  // Time weight exponent for J and K: t^{-sigma/2}.
  double sigma = 0.0;
  // Time Lorentz exponents for L.
  Exponent alpha = Exponent::inf();
  Exponent beta = Exponent::inf();
  LorentzIndex index = LorentzIndex(Exponent::infbar(), Exponent::inf());

  static PathSpec J(double sigma, LorentzIndex idx) { return {PathFamily::J, sigma, Exponent::inf(), Exponent::inf(), idx}; }
  static PathSpec K(double sigma, LorentzIndex idx) { return {PathFamily::K, sigma, Exponent::inf(), Exponent::inf(), idx}; }
  static PathSpec L(Exponent alpha, Exponent beta, LorentzIndex idx) { return {PathFamily::L, 0.0, alpha, beta, idx}; }

  // alpha in (1, inf], alpha infinite => beta infinite; sigma finite.
  void validate() const;
};

struct PathNorm {
  double value;
  // Set when a time weight overflowed; value is then +inf.
  bool overflow = false;
};

// J and K: max over nodes t > 0 of t^{-sigma/2} ||u(t)||. L: the 1-D Lorentz
// quasinorm of the step function equal to ||u(t_j)|| on (t_{j-1}, t_j].
PathNorm path_norm(const Trajectory& traj, const PathSpec& spec);

// Per-node spatial values ||u(t_j)|| for nodes with t_j > 0.
std::vector<double> node_norms(const Trajectory& traj, const LorentzIndex& idx);

}  // namespace mildns

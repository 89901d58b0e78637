#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "mildns/constants.hpp"
#include "mildns/duhamel.hpp"
#include "mildns/lorentz.hpp"

namespace mildns {

struct SolveConfig {
  double T = 0.5;
  // Uniform lattice with J steps (J + 1 nodes including t = 0).
  std::size_t J = 32;
  // Picard stops when the sup-sup iterate difference is at most this.
  double tol = 1e-10;
  std::size_t max_iter = 64;
  // Lorentz indices recorded per node.
  std::vector<LorentzIndex> indices;
  // Exponent in the smallness criterion.
  Exponent r = Exponent::inf();
  // Exponents for which blowup thresholds are reported.
  std::vector<Exponent> threshold_r;

  // T > 0, J >= 4, tol > 0, max_iter >= 1.
  void validate() const;
};

struct BlowupRecord {
  double t;
  // ||u(t)||*_{r,inf}.
  double norm;
  // 1 / (4 eta (T - t)^{(1 - n/r)/2}).
  double threshold;
  double margin;
  // Remaining lifespan guaranteed from u(t) by the smallness criterion.
  double lifespan_bound;
};

struct SolveReport {
  SolveReport(Trajectory traj, SolveConfig cfg) : trajectory(std::move(traj)), config(std::move(cfg)) {}

  Trajectory trajectory;
  SolveConfig config;
  // Sup-sup norm of u^{m+1} - u^m per iteration.
  std::vector<double> differences;
  // The same differences in the weighted norm sup_t t^{n/2r} ||.||_inf.
  std::vector<double> weighted_differences;
  double g0 = 0.0;
  // Smaller root of L = g0 + L^2; NaN when g0 >= 1/4.
  double lambda = std::numeric_limits<double>::quiet_NaN();
  bool contractive = false;
  bool converged = false;
  std::size_t iterations = 0;
  // Sup-sup norm of u - S[f] + B[u, u].
  double residual = 0.0;
  double existence_horizon = 0.0;
  // delta T^{(1-n/r)/2} ||u||_{J^{-n/r}} for the returned trajectory.
  double weighted_bound = 0.0;
  // Per node: values for each configured index, and the sup norm.
  std::vector<std::vector<double>> norms;
  std::vector<double> sup_norms;
  // Per threshold exponent, one record per node; the threshold is inf at t = T.
  std::vector<std::vector<BlowupRecord>> blowup;
  // Largest sup difference on the overlap after extend (NaN otherwise).
  double overlap_difference = std::numeric_limits<double>::quiet_NaN();
};

// Supremum of T with 4 eta T^{(1-n/r)/2} ||f||*_{r,inf} < 1.
double existence_horizon(double f_weak_norm, int n, const Exponent& r, const ConstantsTable& table);

// Smaller root of L = g0 + L^2; g0 >= 1/4 throws NoContractionError.
double contraction_lambda(double g0);

// Lower bound 1/(4 eta (T - t0)^{(1-n/r)/2}) on ||u(t0)||*_{r,inf} before a
// blowup at T. Requires 0 <= t0 < T.
double blowup_threshold(int n, const Exponent& r, double T, double t0, const ConstantsTable& table);

// Weighted norm sup_t t^{n/2r} ||u(t)||_inf over nodes t > 0.
double weighted_sup(const Trajectory& u, const Exponent& r);

// Picard iteration u <- S[f] - B[u, u] on whole trajectories, starting from
// S[f] or from the supplied guess.
SolveReport picard_solve(const Field& f, const SolveConfig& cfg, const ConstantsTable& table,
                         const Trajectory* guess = nullptr);

// Restarts from u(t0) on (0, extra_T) with the same step and splices the
// result after t0. Throws CannotExtendError when the restart criterion fails.
SolveReport extend(const SolveReport& report, double t0, double extra_T, const SolveConfig& cfg,
                   const ConstantsTable& table);

}  // namespace mildns

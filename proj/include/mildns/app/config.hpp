#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mildns/field_ops.hpp"
#include "mildns/grid.hpp"
#include "mildns/lorentz.hpp"
#include "mildns/solver.hpp"

namespace mildns::app {

struct RunConfig {
  int n = 2;
  std::size_t N = 64;
  double L = 6.283185307179586;
  InitialDataSpec data;
  double T = 0.5;
  std::size_t J = 32;
  // Lorentz indices recorded per node (norms.csv columns).
  std::vector<LorentzIndex> indices;
  // Exponent of the smallness criterion.
  Exponent criterion_r = Exponent::inf();
  // Exponents for blowup thresholds; empty disables the threshold columns.
  std::vector<Exponent> threshold_r;
  double tol = 1e-10;
  std::size_t max_iter = 64;
  // Hoelder exponents for regularity-report.
  std::vector<double> alphas{0.25, 0.5, 0.75};
  // Hoelder pair cap as a fraction of L.
  double holder_radius = 0.125;
  // kernel-check sample times (spanning at least a decade) and L^{p,1} exponents.
  std::vector<double> kernel_times{0.02, 0.05, 0.2};
  std::vector<double> kernel_p{1.5, 2.0};
  // Random trajectories per estimate in estimate-check.
  std::size_t trials = 20;
  std::string out = "out";
  bool strict = false;
  std::uint64_t seed = 0;

  // Throws ValidationError on any out-of-range field.
  void validate() const;
  Grid grid() const;
  SolveConfig solve_config() const;
  // criterion_r followed by threshold_r without duplicates.
  std::vector<Exponent> exponents() const;
};

// Parses a JSON run config. Unknown keys and malformed values throw
// ValidationError; the result is validated.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

// Comma-separated exponent list such as "inf,6,4".
std::vector<Exponent> parse_exponent_list(const std::string& text);

}  // namespace mildns::app

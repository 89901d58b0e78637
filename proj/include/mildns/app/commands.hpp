#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mildns/grid.hpp"

namespace mildns::app {

enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_validation = 2, exit_convergence = 3 };

// Runs the command line (args[0] is the program name) and returns the exit
// status. Diagnostics go to the error stream.
int run(const std::vector<std::string>& args);

struct EstimateRecord {
  std::string id;
  double lhs;
  double rhs;
  double ratio;
};

// Bilinear, heat, product and path-space relation estimates evaluated on
// `trials` random divergence-free trajectories over a uniform lattice with J
// steps on (0, T). Each record should satisfy lhs <= rhs.
std::vector<EstimateRecord> estimate_harness(const Grid& g, double T, std::size_t J, std::size_t trials,
                                             std::uint64_t seed);

// Records with lhs > rhs (1 + slack).
std::size_t count_violations(const std::vector<EstimateRecord>& records, double slack = 1e-10);

}  // namespace mildns::app

#pragma once

#include <cstdint>
#include <string>

#include "mildns/grid.hpp"

namespace mildns {

// Spectral projection onto divergence-free fields. The zero mode (and any
// mode whose odd frequency vanishes) passes through unchanged.
Field leray_project(const Field& u);

// Spectral divergence of a vector field.
Field divergence(const Field& u);

// Spectral gradient of a scalar field.
Field gradient(const Field& phi);

// Max-abs spectral divergence relative to 1 + sup norm.
double relative_divergence(const Field& u);

enum class InitialDataKind { taylor_green, gaussian_vortex, random_solenoidal };

struct InitialDataSpec {
  InitialDataKind kind = InitialDataKind::taylor_green;
  // Sup norm of the generated field (0 gives the zero field).
  double amplitude = 1.0;
  // Gaussian vortex core width.
  double width = 1.0;
  std::uint64_t seed = 0;
  // Random data: mode amplitudes decay like |k|^-slope.
  double spectral_slope = 2.0;

  static InitialDataKind parse_kind(const std::string& s);
  static std::string kind_name(InitialDataKind k);
};

Field generate_initial_data(const Grid& g, const InitialDataSpec& spec);

}  // namespace mildns

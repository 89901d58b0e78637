#pragma once

#include <map>
#include <string>
#include <vector>

#include "mildns/grid.hpp"
#include "mildns/lorentz.hpp"

namespace mildns {

enum class KernelTag { heat, oseen };

// Symbol e^{-t|xi|^2} h(xi) times a derivative (i xi)^alpha. The derivative is
// either one multi-index or the full tensor of all derivatives of a given
// order (order 1 gives the gradient).
struct MultiplierSpec {
  KernelTag tag = KernelTag::heat;
  int order = 0;
  // Explicit multi-index (length n); empty selects the full tensor of order `order`.
  std::vector<int> alpha;

  static MultiplierSpec heat(int order = 0) { return {KernelTag::heat, order, {}}; }
  static MultiplierSpec oseen(int order = 0) { return {KernelTag::oseen, order, {}}; }
  static MultiplierSpec with_alpha(KernelTag tag, std::vector<int> alpha);

  int derivative_order() const;
  // Tensor rank of the sampled profile.
  int output_rank() const;
  std::size_t components(int n) const;
  // Validates against dimension n: |alpha| <= 2, alpha length n.
  void validate(int n) const;
  std::string label() const;
  std::string alpha_label() const;
};

struct KernelProfile {
  MultiplierSpec spec;
  double t;
  Field values;
  double l1_norm;
  // Cached L^{p,1} quasinorms keyed by p.
  std::map<double, double> lp1;
  // Set when the box is smaller than 10 sqrt(t) (periodic images matter).
  bool small_box = false;
};

// (4 pi t)^{-n/2} exp(-|x|^2 / 4t).
double heat_kernel(double t, const double* x, int n);

struct KernelOptions {
  // Escalate the small-box accuracy warning (L < 10 sqrt t) to an error.
  bool strict = false;
};

// Spectral evaluation of the kernel on the grid's frequency lattice.
KernelProfile kernel_grid(const MultiplierSpec& spec, double t, const Grid& g, const KernelOptions& opt = {});

// Pointwise Frobenius magnitude of the kernel, accumulated component by
// component so that large 3-D lattices stay within memory.
Field kernel_magnitude(const MultiplierSpec& spec, double t, const Grid& g);

struct DecayReport {
  std::vector<double> t;
  // sup_x |K(t,x)| t^{(n+|a|)/2} (1 + |x|/sqrt t)^{n+|a|} per sampled t.
  std::vector<double> per_t;
  double value;
  // max/min - 1 over the t samples.
  double spread;
};

// radius_fraction limits the search to |x| <= radius_fraction * L so that
// periodic images do not contaminate the weighted tail.
DecayReport pointwise_decay_constant(const MultiplierSpec& spec, const std::vector<double>& t_samples,
                                     const Grid& g, double radius_fraction = 0.25);

// L^{p,1} quasinorms of the kernel at time t. `unit_grid` is the lattice used
// at t = 1; at time t the box is scaled by sqrt(t) so the sampling is
// self-similar.
std::vector<double> kernel_lorentz_profile(const MultiplierSpec& spec, double t, const std::vector<double>& p_list,
                                           const Grid& unit_grid);

// Exponent e with ||K(t)|| ~ t^e fitted from two times.
double lorentz_scaling_exponent(const MultiplierSpec& spec, double p, double t1, double t2, const Grid& unit_grid);
// The exponent predicted by the scaling law: -(|alpha| + n/p')/2.
double predicted_scaling_exponent(const MultiplierSpec& spec, double p, int n);

// Max-abs difference between Phi(s) * K(t) (spectral convolution of sampled
// profiles) and K(s + t).
double semigroup_residual(const MultiplierSpec& spec, double s, double t, const Grid& g);

// L1 norm of K(t2) - K(t1) (Frobenius magnitude).
double kernel_l1_difference(const MultiplierSpec& spec, double t1, double t2, const Grid& g);

}  // namespace mildns

#include "mildns/solver.hpp"

#include <algorithm>
#include <cmath>

#include "mildns/errors.hpp"
#include "mildns/field_ops.hpp"

namespace mildns {

namespace {

void require_supercritical(int n, const Exponent& r) {
  if (!r.is_infinite() && !(r.value() > n))
    throw SubcriticalityError("r = " + r.token() + " must exceed the dimension");
}

// (1 - n/r) / 2.
double time_exponent(int n, const Exponent& r) { return 0.5 * (1.0 - n * r.reciprocal()); }

double weak_norm(const Field& f, const Exponent& r) {
  const LorentzIndex idx = r.is_infinite() ? LorentzIndex(Exponent::infbar(), Exponent::inf())
                                           : LorentzIndex(r, Exponent::inf());
  return lorentz_quasinorm(f, idx);
}

std::vector<double> uniform_times(double T, std::size_t J) {
  std::vector<double> t(J + 1);
  for (std::size_t j = 0; j <= J; ++j) t[j] = T * static_cast<double>(j) / static_cast<double>(J);
  return t;
}

// Per-node norm records and blowup monitor for a finished trajectory.
void record(SolveReport& rep, const ConstantsTable& table) {
  const Trajectory& u = rep.trajectory;
  const int n = u.grid().dim();
  const double T = rep.config.T;
  rep.norms.assign(u.size(), {});
  rep.sup_norms.assign(u.size(), 0.0);
  for (std::size_t j = 0; j < u.size(); ++j) {
    for (const LorentzIndex& idx : rep.config.indices) rep.norms[j].push_back(lorentz_value(u.field(j), idx));
    rep.sup_norms[j] = u.field(j).sup_norm();
  }
  rep.blowup.assign(rep.config.threshold_r.size(), {});
  for (std::size_t k = 0; k < rep.config.threshold_r.size(); ++k) {
    const Exponent& r = rep.config.threshold_r[k];
    for (std::size_t j = 0; j < u.size(); ++j) {
      const double t = u.time(j);
      BlowupRecord b{};
      b.t = t;
      b.norm = weak_norm(u.field(j), r);
      b.threshold = t < T ? blowup_threshold(n, r, T, t, table) : std::numeric_limits<double>::infinity();
      b.margin = b.threshold - b.norm;
      b.lifespan_bound = existence_horizon(b.norm, n, r, table);
      rep.blowup[k].push_back(b);
    }
  }
}

}  // namespace

void SolveConfig::validate() const {
  if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("T must be positive");
  if (J < 4) throw ValidationError("J must be at least 4");
  if (!(tol > 0.0)) throw ValidationError("Picard tolerance must be positive");
  if (max_iter < 1) throw ValidationError("max_iter must be at least 1");
}

double existence_horizon(double f_weak_norm, int n, const Exponent& r, const ConstantsTable& table) {
  require_supercritical(n, r);
  if (!(f_weak_norm >= 0.0)) throw DomainError("norm must be non-negative");
  if (f_weak_norm == 0.0) return std::numeric_limits<double>::infinity();
  const double eta = table_row(table, r).eta;
  return std::pow(4.0 * eta * f_weak_norm, -1.0 / time_exponent(n, r));
}

double contraction_lambda(double g0) {
  if (!(g0 >= 0.0)) throw DomainError("g0 must be non-negative");
  if (g0 >= 0.25) throw NoContractionError("g0 >= 1/4: the smallness condition fails");
  // (1 - sqrt(1 - 4 g0)) / 2 written without cancellation.
  return 2.0 * g0 / (1.0 + std::sqrt(1.0 - 4.0 * g0));
}

double blowup_threshold(int n, const Exponent& r, double T, double t0, const ConstantsTable& table) {
  require_supercritical(n, r);
  if (!(t0 >= 0.0)) throw DomainError("t0 must be non-negative");
  if (!(t0 < T)) throw DomainError("t0 must precede the blowup time");
  const double eta = table_row(table, r).eta;
  return 1.0 / (4.0 * eta * std::pow(T - t0, time_exponent(n, r)));
}

double weighted_sup(const Trajectory& u, const Exponent& r) {
  const int n = u.grid().dim();
  return path_norm(u, PathSpec::J(-n * r.reciprocal(), LorentzIndex(Exponent::infbar(), Exponent::inf()))).value;
}

SolveReport picard_solve(const Field& f, const SolveConfig& cfg, const ConstantsTable& table, const Trajectory* guess) {
  cfg.validate();
  const Grid& g = f.grid();
  const int n = g.dim();
  if (f.rank() != 1) throw RankError("initial datum must be a vector field");
  require_supercritical(n, cfg.r);
  f.require_finite();
  if (relative_divergence(f) > 1e-8) throw InputError("initial datum is not divergence free");
  const double delta = table_row(table, cfg.r).delta;
  const double weight = delta * std::pow(cfg.T, time_exponent(n, cfg.r));

  const Trajectory u0 = heat_trajectory(f, uniform_times(cfg.T, cfg.J));
  SolveReport rep{u0, cfg};
  if (guess) {
    if (!(guess->grid() == g) || guess->times() != u0.times())
      throw ValidationError("initial guess must share the solve lattice");
    rep.trajectory = *guess;
  }
  rep.g0 = weight * weighted_sup(u0, cfg.r);
  rep.contractive = rep.g0 < 0.25;
  if (rep.contractive) rep.lambda = contraction_lambda(rep.g0);
  rep.existence_horizon = existence_horizon(weak_norm(f, cfg.r), n, cfg.r, table);

  Trajectory& u = rep.trajectory;
  for (std::size_t m = 1; m <= cfg.max_iter; ++m) {
    Trajectory next = u0 - bilinear_B(u, u);
    const Trajectory diff = next - u;
    const double d = diff.sup_sup();
    rep.differences.push_back(d);
    rep.weighted_differences.push_back(weighted_sup(diff, cfg.r));
    rep.iterations = m;
    u = std::move(next);
    if (!std::isfinite(d)) break;
    if (d <= cfg.tol) {
      rep.converged = true;
      break;
    }
  }
  if (std::isfinite(u.sup_sup())) {
    rep.residual = sup_distance(u, u0 - bilinear_B(u, u));
    rep.weighted_bound = weight * weighted_sup(u, cfg.r);
  } else {
    rep.residual = std::numeric_limits<double>::infinity();
    rep.weighted_bound = std::numeric_limits<double>::infinity();
  }
  if (rep.converged) u.mark_divergence_free();
  record(rep, table);
  return rep;
}

SolveReport extend(const SolveReport& report, double t0, double extra_T, const SolveConfig& cfg,
                   const ConstantsTable& table) {
  const Trajectory& old = report.trajectory;
  const std::size_t j0 = old.find_node(t0);
  if (j0 == old.size()) throw RangeError("restart time is not a node of the trajectory");
  if (!(extra_T >= 0.0)) throw DomainError("extension length must be non-negative");
  if (extra_T == 0.0) return report;
  const Grid& g = old.grid();
  const int n = g.dim();
  require_supercritical(n, cfg.r);
  const Field& start = old.field(j0);
  const double eta = table_row(table, cfg.r).eta;
  const double crit = 4.0 * eta * std::pow(extra_T, time_exponent(n, cfg.r)) * weak_norm(start, cfg.r);
  if (!(crit < 1.0))
    throw CannotExtendError("restart criterion fails at t0 = " + std::to_string(old.time(j0)),
                            1.0 / (4.0 * eta * std::pow(extra_T, time_exponent(n, cfg.r))));

  const double dt = report.config.T / static_cast<double>(report.config.J);
  SolveConfig sub_cfg = cfg;
  sub_cfg.T = extra_T;
  sub_cfg.J = std::max<std::size_t>(4, static_cast<std::size_t>(std::llround(extra_T / dt)));
  const SolveReport sub = picard_solve(start, sub_cfg, table);

  std::vector<double> times(old.times().begin(), old.times().begin() + static_cast<long>(j0) + 1);
  std::vector<Field> fields(old.fields().begin(), old.fields().begin() + static_cast<long>(j0) + 1);
  const double base = old.time(j0);
  double overlap = 0.0;
  bool any_overlap = false;
  for (std::size_t k = 1; k < sub.trajectory.size(); ++k) {
    const double t = base + sub.trajectory.time(k);
    times.push_back(t);
    fields.push_back(sub.trajectory.field(k));
    const std::size_t j = old.find_node(t);
    if (j < old.size()) {
      overlap = std::max(overlap, (old.field(j) - sub.trajectory.field(k)).sup_norm());
      any_overlap = true;
    }
  }

  SolveReport out{Trajectory(g, std::move(times), std::move(fields), sub.converged && report.converged), cfg};
  out.config.T = base + sub.trajectory.horizon();
  out.config.J = out.trajectory.size() - 1;
  out.differences = sub.differences;
  out.weighted_differences = sub.weighted_differences;
  out.g0 = sub.g0;
  out.lambda = sub.lambda;
  out.contractive = sub.contractive;
  out.converged = report.converged && sub.converged;
  out.iterations = sub.iterations;
  out.residual = std::max(report.residual, sub.residual);
  out.existence_horizon = report.existence_horizon;
  out.weighted_bound = sub.weighted_bound;
  if (any_overlap) out.overlap_difference = overlap;
  record(out, table);
  return out;
}

}  // namespace mildns

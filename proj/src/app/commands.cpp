#include "mildns/app/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "mildns/app/config.hpp"
#include "mildns/app/csv.hpp"
#include "mildns/app/svg.hpp"
#include "mildns/constants.hpp"
#include "mildns/duhamel.hpp"
#include "mildns/errors.hpp"
#include "mildns/kernels.hpp"
#include "mildns/regularity.hpp"
#include "mildns/solver.hpp"

namespace mildns::app {

namespace {

using ojson = nlohmann::ordered_json;

struct Overrides {
  std::string config;
  std::optional<std::string> out;
  bool strict = false;
  std::optional<std::uint64_t> seed;
  std::optional<int> n;
  std::optional<std::size_t> N, J, max_iter, trials;
  std::optional<double> L, T, tol, amplitude;
  std::optional<std::string> r, data;
  std::string csv;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config, "JSON run config");
  sub->add_option("--out", o.out, "output directory");
  sub->add_flag("--strict", o.strict, "escalate accuracy warnings and estimate violations");
  sub->add_option("--seed", o.seed, "seed for random data");
  sub->add_option("--n", o.n, "space dimension");
  sub->add_option("--N", o.N, "points per axis");
  sub->add_option("--L", o.L, "box length");
  sub->add_option("--T", o.T, "time horizon");
  sub->add_option("--J", o.J, "time steps");
  sub->add_option("--tol", o.tol, "Picard tolerance");
  sub->add_option("--max-iter", o.max_iter, "Picard iteration cap");
  sub->add_option("--trials", o.trials, "random trajectories per estimate");
  sub->add_option("--amplitude", o.amplitude, "initial data amplitude");
  sub->add_option("--data", o.data, "initial data kind");
  sub->add_option("--r", o.r, "comma-separated exponent list, e.g. inf,6,4");
}

RunConfig build_config(const Overrides& o) {
  RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (o.out) c.out = *o.out;
  c.strict = c.strict || o.strict;
  if (o.seed) c.seed = *o.seed;
  c.data.seed = c.seed;
  if (o.n) c.n = *o.n;
  if (o.N) c.N = *o.N;
  if (o.L) c.L = *o.L;
  if (o.T) c.T = *o.T;
  if (o.J) c.J = *o.J;
  if (o.tol) c.tol = *o.tol;
  if (o.max_iter) c.max_iter = *o.max_iter;
  if (o.trials) c.trials = *o.trials;
  if (o.amplitude) c.data.amplitude = *o.amplitude;
  if (o.data) {
    try {
      c.data.kind = InitialDataSpec::parse_kind(*o.data);
    } catch (const Error& e) {
      throw ValidationError(e.what());
    }
  }
  if (o.r) c.threshold_r = parse_exponent_list(*o.r);
  c.validate();
  return c;
}

void write_json(const std::string& path, const ojson& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << doc.dump(2) << '\n';
}

std::string in_out(const RunConfig& c, const std::string& name) { return c.out + "/" + name; }

double finite_or_nan(double v) { return std::isfinite(v) ? v : std::numeric_limits<double>::quiet_NaN(); }

// ---- constants ---------------------------------------------------------------

int cmd_constants(const RunConfig& c) {
  const std::vector<Exponent> rs = c.threshold_r.empty() ? std::vector<Exponent>{Exponent::inf()} : c.threshold_r;
  const ConstantsTable tab = eta_table(c.n, rs);
  std::filesystem::create_directories(c.out);
  ojson doc;
  doc["n"] = tab.n;
  doc["r"] = ojson::array();
  doc["beta"] = ojson::array();
  doc["gamma"] = tab.gamma;
  doc["alpha"] = tab.alpha;
  doc["delta"] = ojson::array();
  doc["eta"] = ojson::array();
  for (const ConstantsRow& row : tab.rows) {
    doc["r"].push_back(row.r.token());
    doc["beta"].push_back(row.beta);
    doc["delta"].push_back(row.delta);
    doc["eta"].push_back(row.eta);
  }
  doc["provenance"] = ojson::object();
  for (const auto& [k, v] : tab.provenance) doc["provenance"][k] = v;
  write_json(in_out(c, "constants.json"), doc);
  return exit_ok;
}

// ---- norms ---------------------------------------------------------------------

std::vector<LorentzIndex> default_indices() {
  return {LorentzIndex::quasi(2.0, 1.0), LorentzIndex::quasi(2.0, 2.0),
          LorentzIndex(Exponent::finite(2.0), Exponent::inf()), LorentzIndex::quasi(4.0, 2.0),
          LorentzIndex(Exponent::infbar(), Exponent::inf())};
}

int cmd_norms(const RunConfig& c) {
  const Field f = generate_initial_data(c.grid(), c.data);
  const auto indices = c.indices.empty() ? default_indices() : c.indices;
  std::vector<std::vector<std::string>> rows;
  for (const LorentzIndex& idx : indices) {
    double norm = std::numeric_limits<double>::quiet_NaN();
    if (!idx.p().is_infinite() ? idx.p().value() > 1.0 : true)
      norm = lorentz_norm(f, LorentzIndex(idx.p(), idx.q(), LorentzIndex::Variant::norm));
    rows.push_back({idx.label(), format_number(lorentz_quasinorm(f, idx)), format_number(norm)});
  }
  std::filesystem::create_directories(c.out);
  write_csv(in_out(c, "datum_norms.csv"), {"index", "quasinorm", "norm"}, rows);
  return exit_ok;
}

// ---- kernel-check --------------------------------------------------------------

int cmd_kernel_check(const RunConfig& c) {
  const Grid g = c.grid();
  const std::vector<MultiplierSpec> specs{MultiplierSpec::heat(0), MultiplierSpec::heat(1), MultiplierSpec::oseen(0),
                                          MultiplierSpec::oseen(1)};
  KernelOptions opt;
  opt.strict = c.strict;
  std::vector<std::string> header{"tag", "alpha", "t", "L1_norm"};
  for (double p : c.kernel_p) header.push_back("Lp1_" + format_number(p));
  header.push_back("decay_constant");
  header.push_back("semigroup_residual");
  std::vector<std::vector<std::string>> rows;
  bool warned = false;
  for (const MultiplierSpec& spec : specs) {
    const double decay = pointwise_decay_constant(spec, c.kernel_times, g).value;
    for (double t : c.kernel_times) {
      const KernelProfile kp = kernel_grid(spec, t, g, opt);
      if (kp.small_box && !warned) {
        std::cerr << "mildns: warning: box shorter than 10 sqrt(t); periodic images affect kernel norms\n";
        warned = true;
      }
      std::vector<std::string> row{spec.tag == KernelTag::heat ? "heat" : "oseen", spec.alpha_label(),
                                   format_number(t), format_number(kp.l1_norm)};
      for (double p : c.kernel_p) row.push_back(format_number(lorentz_quasinorm(kp.values, LorentzIndex::quasi(p, 1.0))));
      row.push_back(format_number(decay));
      row.push_back(format_number(semigroup_residual(spec, t, t, g)));
      rows.push_back(std::move(row));
    }
  }
  std::filesystem::create_directories(c.out);
  write_csv(in_out(c, "kernel_check.csv"), header, rows);
  return exit_ok;
}

// ---- estimate-check ------------------------------------------------------------

int cmd_estimate_check(const RunConfig& c) {
  const auto records = estimate_harness(c.grid(), c.T, c.J, c.trials, c.seed);
  std::vector<std::vector<std::string>> rows;
  for (const EstimateRecord& r : records)
    rows.push_back({r.id, format_number(r.lhs), format_number(r.rhs), format_number(r.ratio)});
  std::filesystem::create_directories(c.out);
  write_csv(in_out(c, "estimates.csv"), {"id", "lhs", "rhs", "ratio"}, rows);
  const std::size_t bad = count_violations(records);
  if (bad > 0) {
    std::cerr << "mildns: " << bad << " of " << records.size() << " estimates violated\n";
    if (c.strict) return exit_convergence;
  }
  return exit_ok;
}

// ---- solve and reports ---------------------------------------------------------

struct Solved {
  Field datum;
  ConstantsTable table;
  SolveReport report;
};

Solved run_solve(const RunConfig& c) {
  Field f = generate_initial_data(c.grid(), c.data);
  ConstantsTable table = eta_table(c.n, c.exponents());
  SolveReport rep = picard_solve(f, c.solve_config(), table);
  return Solved{std::move(f), std::move(table), std::move(rep)};
}

// Max over nodes of the sup distance to the heat flow of the datum; the
// Taylor-Green flow is an exact solution of this form.
double taylor_green_error(const Solved& s) {
  double err = 0.0;
  const Trajectory& u = s.report.trajectory;
  for (std::size_t j = 0; j < u.size(); ++j)
    err = std::max(err, (u.field(j) - apply_heat(s.datum, u.time(j))).sup_norm());
  return err;
}

void write_summary(const RunConfig& c, const Solved& s, double sup_error) {
  const SolveReport& r = s.report;
  ojson doc;
  doc["g0"] = r.g0;
  doc["lambda"] = r.lambda;
  doc["iterations"] = r.iterations;
  doc["converged"] = r.converged;
  doc["existence_horizon"] = finite_or_nan(r.existence_horizon);
  doc["residual"] = r.residual;
  doc["sup_error"] = sup_error;
  doc["contractive"] = r.contractive;
  doc["weighted_bound"] = r.weighted_bound;
  doc["criterion_r"] = c.criterion_r.token();
  doc["initial_data"] = {{"kind", InitialDataSpec::kind_name(c.data.kind)},
                         {"amplitude", c.data.amplitude},
                         {"seed", c.seed}};
  doc["grid"] = {{"n", c.n}, {"N", c.N}, {"L", c.L}};
  doc["time"] = {{"T", c.T}, {"J", c.J}};
  doc["tol"] = c.tol;
  write_json(in_out(c, "summary.json"), doc);
}

void write_norms(const RunConfig& c, const SolveReport& r) {
  std::vector<std::string> header{"t"};
  for (const LorentzIndex& idx : r.config.indices) header.push_back(idx.label());
  header.push_back("sup_norm");
  for (const Exponent& e : r.config.threshold_r) header.push_back("blowup_threshold_" + e.token());
  std::vector<std::vector<std::string>> rows;
  const Trajectory& u = r.trajectory;
  for (std::size_t j = 0; j < u.size(); ++j) {
    std::vector<std::string> row{format_number(u.time(j))};
    for (double v : r.norms[j]) row.push_back(format_number(v));
    row.push_back(format_number(r.sup_norms[j]));
    for (const auto& series : r.blowup) row.push_back(format_number(series[j].threshold));
    rows.push_back(std::move(row));
  }
  write_csv(in_out(c, "norms.csv"), header, rows);
}

// Writes the summary and returns the exit status for a finished solve.
int finish(const RunConfig& c, const Solved& s) {
  const bool tg = c.data.kind == InitialDataKind::taylor_green;
  const double err = tg ? taylor_green_error(s) : std::numeric_limits<double>::quiet_NaN();
  write_summary(c, s, err);
  if (!s.report.converged) {
    std::cerr << "mildns: Picard iteration did not converge after " << s.report.iterations << " iterations\n";
    return exit_convergence;
  }
  if (c.strict && tg && !(err <= 1e-6)) {
    std::cerr << "mildns: Taylor-Green sup error " << err << " exceeds 1e-6\n";
    return exit_convergence;
  }
  return exit_ok;
}

int cmd_solve(const RunConfig& c) {
  const Solved s = run_solve(c);
  std::filesystem::create_directories(c.out);
  write_norms(c, s.report);
  return finish(c, s);
}

int cmd_regularity(const RunConfig& c) {
  const Solved s = run_solve(c);
  const std::vector<LorentzIndex> indices =
      c.indices.empty() ? std::vector<LorentzIndex>{LorentzIndex(Exponent::infbar(), Exponent::inf())} : c.indices;
  const RegularityReport rep = regularity_report(s.report.trajectory, c.alphas, indices, c.holder_radius);
  std::vector<std::string> header{"t", "alpha", "quotient", "bracket", "ratio"};
  for (const LorentzIndex& idx : indices) header.push_back("gap_" + idx.label());
  const Trajectory& u = s.report.trajectory;
  std::vector<std::vector<std::string>> rows;
  for (const HolderRow& row : rep.rows) {
    const std::size_t node = u.find_node(row.t);
    std::vector<std::string> cells{format_number(row.t), format_number(row.alpha), format_number(row.quotient),
                                   format_number(row.bracket), format_number(row.ratio)};
    for (const auto& gaps : rep.gaps) cells.push_back(format_number(gaps[node - 1]));
    rows.push_back(std::move(cells));
  }
  std::filesystem::create_directories(c.out);
  write_csv(in_out(c, "regularity.csv"), header, rows);
  return finish(c, s);
}

int cmd_blowup(RunConfig c) {
  if (c.threshold_r.empty()) c.threshold_r.push_back(c.criterion_r);
  const Solved s = run_solve(c);
  std::filesystem::create_directories(c.out);
  write_norms(c, s.report);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < s.report.blowup.size(); ++k)
    for (const BlowupRecord& b : s.report.blowup[k])
      rows.push_back({format_number(b.t), c.threshold_r[k].token(), format_number(b.norm), format_number(b.threshold),
                      format_number(b.margin), format_number(b.lifespan_bound)});
  write_csv(in_out(c, "blowup.csv"), {"t", "r", "norm", "threshold", "margin", "lifespan_bound"}, rows);
  return finish(c, s);
}

int cmd_plot(const Overrides& o) {
  const std::string out = o.out.value_or("out");
  const std::string csv = o.csv.empty() ? out + "/norms.csv" : o.csv;
  const CsvTable table = read_csv(csv);
  std::filesystem::create_directories(out);
  plot_norms(table, out);
  return exit_ok;
}

// ---- estimate harness helpers --------------------------------------------------

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Field random_solenoidal(const Grid& g, std::mt19937_64& rng) {
  InitialDataSpec spec;
  spec.kind = InitialDataKind::random_solenoidal;
  spec.seed = rng();
  spec.amplitude = uniform(rng, 0.2, 2.0);
  spec.spectral_slope = uniform(rng, 1.0, 3.0);
  return generate_initial_data(g, spec);
}

// Independent random nodes; the t = 0 node repeats t_1 so the interpolated
// integrand stays inside the path norm.
Trajectory random_trajectory(const Grid& g, double T, std::size_t J, std::mt19937_64& rng) {
  Trajectory tr = Trajectory::uniform(g, T, J);
  for (std::size_t j = 1; j < tr.size(); ++j) tr.field(j) = random_solenoidal(g, rng);
  tr.field(0) = tr.field(1);
  tr.mark_divergence_free();
  return tr;
}

Exponent exponent_of(double r) { return std::isinf(r) ? Exponent::inf() : Exponent::finite(r); }

LorentzIndex weak_index(double r) {
  return std::isinf(r) ? LorentzIndex(Exponent::infbar(), Exponent::inf())
                       : LorentzIndex(Exponent::finite(r), Exponent::inf());
}

std::string tag(const std::string& stem, std::size_t trial) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_%03zu", trial);
  return stem + buf;
}

void push(std::vector<EstimateRecord>& out, std::string id, double lhs, double rhs) {
  out.push_back({std::move(id), lhs, rhs, rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? INFINITY : 0.0)});
}

}  // namespace

std::vector<EstimateRecord> estimate_harness(const Grid& g, double T, std::size_t J, std::size_t trials,
                                             std::uint64_t seed) {
  const int n = g.dim();
  const double inf = std::numeric_limits<double>::infinity();
  const std::vector<double> bilinear_r{inf, 2.0 * n};
  const std::vector<double> heat_r{inf, 2.0 * n, 3.0 * n};
  std::vector<Exponent> table_r;
  for (double r : heat_r) table_r.push_back(exponent_of(r));
  const ConstantsTable table = eta_table(n, table_r);
  std::mt19937_64 rng(seed);
  std::vector<EstimateRecord> out;
  std::vector<double> times;
  for (std::size_t j = 0; j <= J; ++j) times.push_back(T * static_cast<double>(j) / static_cast<double>(J));

  for (std::size_t trial = 0; trial < trials; ++trial) {
    const Trajectory u = random_trajectory(g, T, J, rng);
    const Trajectory v = random_trajectory(g, T, J, rng);

    // Bilinear estimate in the weighted sup norm.
    const Trajectory B = bilinear_B(u, v);
    for (double r : bilinear_r) {
      const Exponent re = exponent_of(r);
      const double delta = table_row(table, re).delta;
      push(out, tag("bilinear_r" + re.token(), trial), weighted_sup(B, re),
           delta * std::pow(T, 0.5 * (1.0 - n / r)) * weighted_sup(u, re) * weighted_sup(v, re));
    }

    // Heat estimates.
    const Field f = random_solenoidal(g, rng);
    const Trajectory S = heat_trajectory(f, times);
    for (auto [p, q] : {std::pair{2.0, 1.0}, std::pair{2.0, 2.0}, std::pair{4.0, 2.0}, std::pair{3.0, inf}}) {
      const LorentzIndex idx(Exponent::finite(p), exponent_of(q), LorentzIndex::Variant::norm);
      push(out, tag("heat_" + idx.label(), trial), path_norm(S, PathSpec::J(0.0, idx)).value, lorentz_norm(f, idx));
    }
    for (double r : heat_r) {
      const Exponent re = exponent_of(r);
      push(out, tag("heat_weighted_r" + re.token(), trial), weighted_sup(S, re),
           re.conjugate() * table.alpha * lorentz_quasinorm(f, weak_index(r)));
    }

    // Product estimates, raw pointwise product.
    Trajectory w = Trajectory::uniform(g, T, J, 2);
    for (std::size_t j = 0; j < w.size(); ++j) w.field(j) = tensor_product(u.field(j), v.field(j), false);
    for (double r : {2.0 * n, 3.0 * n, inf}) {
      const double sigma = -n / r + uniform(rng, -0.5, 0.5);
      const LorentzIndex full(exponent_of(r), Exponent::inf(), LorentzIndex::Variant::norm);
      push(out, tag("product_r" + exponent_of(r).token(), trial),
           path_norm(w, PathSpec::K(2.0 * sigma, weak_index(r / 2.0))).value,
           path_norm(u, PathSpec::K(sigma, full)).value * path_norm(v, PathSpec::K(sigma, full)).value);
    }

    // Path-space relation chain for the time indices (3, 6).
    const double a1 = 3.0, a2 = 6.0;
    const double C = (1.0 / a1) / (1.0 / a1 - 1.0 / a2);
    for (const LorentzIndex& idx : {LorentzIndex::quasi(2.0, 2.0), LorentzIndex(Exponent::infbar(), Exponent::inf())}) {
      const double lhs = path_norm(u, PathSpec::L(Exponent::finite(a1), Exponent::finite(1.0), idx)).value;
      const double mid = path_norm(u, PathSpec::L(Exponent::finite(a2), Exponent::inf(), idx)).value;
      const double jn = path_norm(u, PathSpec::J(-2.0 / a2, idx)).value;
      const double kn = path_norm(u, PathSpec::K(-2.0 / a2, idx)).value;
      push(out, tag("relation_L3_1_" + idx.label(), trial), lhs, C * std::pow(T, 1.0 / a1 - 1.0 / a2) * mid);
      push(out, tag("relation_L6_inf_" + idx.label(), trial), mid, jn);
      push(out, tag("relation_K_J_" + idx.label(), trial), kn, jn);
    }
  }
  return out;
}

std::size_t count_violations(const std::vector<EstimateRecord>& records, double slack) {
  std::size_t bad = 0;
  for (const EstimateRecord& r : records)
    if (!(r.lhs <= r.rhs * (1.0 + slack))) ++bad;
  return bad;
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"Mild-solution laboratory for the Navier-Stokes equations in Lorentz spaces", "mildns"};
  app.require_subcommand(1);
  Overrides o;
  const std::vector<std::pair<std::string, std::string>> names{
      {"constants", "tabulate beta, gamma, alpha, delta and eta"},
      {"norms", "Lorentz norms of the initial datum"},
      {"kernel-check", "heat and Oseen kernel certification"},
      {"estimate-check", "bilinear, heat and product estimates on random trajectories"},
      {"solve", "Picard iteration for the mild solution"},
      {"regularity-report", "Hoelder quotients and continuity moduli of the solution"},
      {"blowup-report", "blowup thresholds along the solution"},
      {"plot", "SVG plots from a norms table"}};
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : names) {
    CLI::App* sub = app.add_subcommand(name, help);
    if (name == "plot") {
      sub->add_option("--csv", o.csv, "norms table (default OUT/norms.csv)");
      sub->add_option("--out", o.out, "output directory");
    } else {
      add_common(sub, o);
    }
    subs.push_back(sub);
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp& e) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    std::cerr << "mildns: error: " << e.what() << '\n';
    return exit_validation;
  }

  try {
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "plot") return cmd_plot(o);
    const RunConfig c = build_config(o);
    if (name == "constants") return cmd_constants(c);
    if (name == "norms") return cmd_norms(c);
    if (name == "kernel-check") return cmd_kernel_check(c);
    if (name == "estimate-check") return cmd_estimate_check(c);
    if (name == "solve") return cmd_solve(c);
    if (name == "regularity-report") return cmd_regularity(c);
    if (name == "blowup-report") return cmd_blowup(c);
  } catch (const ConvergenceError& e) {
    std::cerr << "mildns: convergence failure: " << e.what() << '\n';
    return exit_convergence;
  } catch (const NumericError& e) {
    std::cerr << "mildns: numeric failure: " << e.what() << '\n';
    return exit_convergence;
  } catch (const Error& e) {
    std::cerr << "mildns: error: " << e.what() << '\n';
    return exit_validation;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "mildns: error: " << e.what() << '\n';
    return exit_validation;
  }
  return exit_failure;
}

}  // namespace mildns::app

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "mildns/app/commands.hpp"
#include "mildns/constants.hpp"
#include "mildns/errors.hpp"
#include "mildns/field_ops.hpp"
#include "mildns/lorentz.hpp"
#include "mildns/solver.hpp"

namespace py = pybind11;
using namespace mildns;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Exponent to_exponent(const py::object& v) {
  if (py::isinstance<py::str>(v)) return Exponent::parse(v.cast<std::string>());
  const double x = v.cast<double>();
  return std::isinf(x) ? Exponent::inf() : Exponent::finite(x);
}

std::vector<py::ssize_t> field_shape(const Grid& g, std::size_t components) {
  std::vector<py::ssize_t> shape{static_cast<py::ssize_t>(components)};
  for (int d = 0; d < g.dim(); ++d) shape.push_back(static_cast<py::ssize_t>(g.points_per_axis()));
  return shape;
}

// Samples as an array of shape (components, N, ..., N).
Array field_to_array(const Field& f) {
  Array out(field_shape(f.grid(), f.components()));
  std::copy(f.values().begin(), f.values().end(), out.mutable_data());
  return out;
}

Field field_from_array(const Grid& g, const Array& values, int rank) {
  const std::size_t comps = component_count(g.dim(), rank);
  if (static_cast<std::size_t>(values.size()) != comps * g.size())
    throw ValidationError("array size does not match the grid and rank");
  return Field(g, rank, std::vector<double>(values.data(), values.data() + values.size()));
}

py::dict table_to_dict(const ConstantsTable& tab) {
  py::dict d;
  d["n"] = tab.n;
  d["alpha"] = tab.alpha;
  d["gamma"] = tab.gamma;
  py::list rows;
  for (const ConstantsRow& row : tab.rows) {
    py::dict r;
    r["r"] = row.r.token();
    r["r_conj"] = row.r_conj;
    r["beta"] = row.beta;
    r["delta"] = row.delta;
    r["eta"] = row.eta;
    r["divergent"] = row.divergent;
    rows.append(r);
  }
  d["rows"] = rows;
  d["provenance"] = tab.provenance;
  return d;
}

std::vector<Exponent> exponents(const std::vector<py::object>& list) {
  std::vector<Exponent> out;
  for (const py::object& v : list) out.push_back(to_exponent(v));
  return out;
}

py::dict solve(const Field& f, double T, std::size_t J, double tol, std::size_t max_iter, const py::object& r,
               const std::vector<py::object>& threshold_r) {
  SolveConfig cfg;
  cfg.T = T;
  cfg.J = J;
  cfg.tol = tol;
  cfg.max_iter = max_iter;
  cfg.r = to_exponent(r);
  cfg.threshold_r = exponents(threshold_r);
  std::vector<Exponent> table_r{cfg.r};
  for (const Exponent& e : cfg.threshold_r)
    if (std::find(table_r.begin(), table_r.end(), e) == table_r.end()) table_r.push_back(e);
  const ConstantsTable table = eta_table(f.grid().dim(), table_r);
  const SolveReport rep = picard_solve(f, cfg, table);

  const Trajectory& u = rep.trajectory;
  std::vector<py::ssize_t> shape = field_shape(u.grid(), u.field(0).components());
  shape.insert(shape.begin(), static_cast<py::ssize_t>(u.size()));
  Array traj(shape);
  double* dst = traj.mutable_data();
  for (std::size_t j = 0; j < u.size(); ++j) dst = std::copy(u.field(j).values().begin(), u.field(j).values().end(), dst);

  py::dict d;
  d["times"] = u.times();
  d["trajectory"] = traj;
  d["g0"] = rep.g0;
  d["lambda"] = rep.lambda;
  d["contractive"] = rep.contractive;
  d["converged"] = rep.converged;
  d["iterations"] = rep.iterations;
  d["residual"] = rep.residual;
  d["existence_horizon"] = rep.existence_horizon;
  d["differences"] = rep.differences;
  d["sup_norms"] = rep.sup_norms;
  py::list thresholds;
  for (const auto& series : rep.blowup) {
    std::vector<double> v;
    for (const BlowupRecord& b : series) v.push_back(b.threshold);
    thresholds.append(v);
  }
  d["blowup_thresholds"] = thresholds;
  return d;
}

}  // namespace

PYBIND11_MODULE(_mildns, m) {
  m.doc() = "Mild solutions of the Navier-Stokes equations in Lorentz spaces";

  static py::exception<Error> base(m, "Error", PyExc_RuntimeError);
  static py::exception<ValidationError> validation(m, "ValidationError", base.ptr());
  static py::exception<DomainError> domain(m, "DomainError", base.ptr());
  static py::exception<IndexError> index(m, "IndexError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      py::set_error(validation, e.what());
    } catch (const DomainError& e) {
      py::set_error(domain, e.what());
    } catch (const IndexError& e) {
      py::set_error(index, e.what());
    } catch (const Error& e) {
      py::set_error(base, e.what());
    }
  });

  py::class_<Grid>(m, "Grid")
      .def(py::init<int, std::size_t, double>(), py::arg("n"), py::arg("N"), py::arg("L"))
      .def_property_readonly("n", &Grid::dim)
      .def_property_readonly("N", &Grid::points_per_axis)
      .def_property_readonly("L", &Grid::length)
      .def_property_readonly("spacing", &Grid::spacing)
      .def("__repr__", [](const Grid& g) {
        return "Grid(n=" + std::to_string(g.dim()) + ", N=" + std::to_string(g.points_per_axis()) +
               ", L=" + std::to_string(g.length()) + ")";
      });

  py::class_<Field>(m, "Field")
      .def(py::init(&field_from_array), py::arg("grid"), py::arg("values"), py::arg("rank") = 1)
      .def_property_readonly("grid", &Field::grid)
      .def_property_readonly("rank", &Field::rank)
      .def("values", &field_to_array)
      .def("sup_norm", &Field::sup_norm)
      .def("l2_norm", &Field::l2_norm);

  m.def(
      "initial_data",
      [](const Grid& g, const std::string& kind, double amplitude, std::uint64_t seed, double width, double slope) {
        InitialDataSpec spec;
        spec.kind = InitialDataSpec::parse_kind(kind);
        spec.amplitude = amplitude;
        spec.seed = seed;
        spec.width = width;
        spec.spectral_slope = slope;
        return generate_initial_data(g, spec);
      },
      py::arg("grid"), py::arg("kind") = "taylor-green", py::arg("amplitude") = 1.0, py::arg("seed") = 0,
      py::arg("width") = 1.0, py::arg("spectral_slope") = 2.0);

  m.def(
      "lorentz_quasinorm",
      [](const Field& f, const py::object& p, const py::object& q) {
        return lorentz_quasinorm(f, LorentzIndex(to_exponent(p), to_exponent(q)));
      },
      py::arg("field"), py::arg("p"), py::arg("q"));
  m.def(
      "lorentz_norm",
      [](const Field& f, const py::object& p, const py::object& q) {
        return lorentz_norm(f, LorentzIndex(to_exponent(p), to_exponent(q), LorentzIndex::Variant::norm));
      },
      py::arg("field"), py::arg("p"), py::arg("q"));

  m.def("beta_constant", &beta_constant, py::arg("n_over_r"));
  m.def("alpha_constant", &alpha_constant, py::arg("n"));
  m.def(
      "gamma_constant",
      [](int n) {
        const GammaResult g = gamma_constant(n);
        py::dict d;
        d["value"] = g.value;
        d["coarse"] = g.coarse;
        d["fine"] = g.fine;
        d["gap"] = g.gap;
        return d;
      },
      py::arg("n"));
  m.def(
      "constants_table",
      [](int n, const std::vector<py::object>& r_list) { return table_to_dict(eta_table(n, exponents(r_list))); },
      py::arg("n"), py::arg("r_list"));
  m.def(
      "blowup_threshold",
      [](int n, const py::object& r, double T, double t0) {
        const Exponent e = to_exponent(r);
        return blowup_threshold(n, e, T, t0, eta_table(n, {e}));
      },
      py::arg("n"), py::arg("r"), py::arg("T"), py::arg("t0"));
  m.def("solve", &solve, py::arg("datum"), py::arg("T") = 0.5, py::arg("J") = 32, py::arg("tol") = 1e-10,
        py::arg("max_iter") = 64, py::arg("r") = py::str("inf"), py::arg("threshold_r") = std::vector<py::object>{});
  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "mildns");
        return app::run(args);
      },
      py::arg("args"));
}

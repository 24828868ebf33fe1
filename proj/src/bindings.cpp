#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "elfv/harness.hpp"

namespace py = pybind11;
using namespace elfv;

namespace {

py::dict diagnostics_dict(const StepDiagnostics& d) {
  py::dict out;
  out["step"] = d.step;
  out["time"] = d.time;
  out["dt"] = d.dt;
  out["tv"] = d.tv;
  out["min"] = d.min_u;
  out["max"] = d.max_u;
  out["mass"] = d.mass;
  out["n_etcs"] = d.n_etcs;
  return out;
}

}  // namespace

PYBIND11_MODULE(_elfv, m) {
  m.doc() = "Eulerian-Lagrangian finite volume solver for Burgers' equation";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());

  py::enum_<Boundary>(m, "Boundary").value("PERIODIC", Boundary::Periodic).value("CONSTANT", Boundary::Constant);
  py::enum_<MergingMode>(m, "MergingMode")
      .value("FULL_DEFINITION", MergingMode::FullDefinition)
      .value("FIVE_CELL_ONLY", MergingMode::FiveCellOnly);
  py::enum_<BoundsMode>(m, "BoundsMode")
      .value("GLOBAL", BoundsMode::Global)
      .value("LOCAL_PER_REGION", BoundsMode::LocalPerRegion);
  py::enum_<ErrorNorm>(m, "ErrorNorm").value("MEAN", ErrorNorm::Mean).value("INTEGRAL", ErrorNorm::Integral);

  py::class_<Grid1D>(m, "Grid1D")
      .def(py::init(&Grid1D::make), py::arg("x_lo"), py::arg("x_hi"), py::arg("n_cells"),
           py::arg("boundary") = Boundary::Periodic)
      .def_readonly("x_lo", &Grid1D::x_lo)
      .def_readonly("x_hi", &Grid1D::x_hi)
      .def_readonly("n_cells", &Grid1D::n_cells)
      .def_readonly("dx", &Grid1D::dx)
      .def_readonly("boundary", &Grid1D::boundary)
      .def("cell_center", &Grid1D::cell_center);

  py::class_<SchemeConfig>(m, "SchemeConfig")
      .def(py::init<>())
      .def_readwrite("c_factor", &SchemeConfig::c_factor)
      .def_readwrite("bounds_mode", &SchemeConfig::bounds_mode)
      .def_readwrite("t_final", &SchemeConfig::t_final)
      .def_readwrite("merging_mode", &SchemeConfig::merging_mode);

  m.def(
      "numerical_flux",
      [](double ul, double ur) {
        const InterfaceData d = numerical_flux(ul, ur, FluxModel::burgers());
        return py::make_tuple(d.nu, d.alpha, d.fhat);
      },
      py::arg("u_left"), py::arg("u_right"), "(nu, alpha, fhat) at one Burgers interface.");

  m.def(
      "time_step",
      [](const std::vector<double>& u, const Grid1D& grid, const SchemeConfig& config) {
        return time_step_size(Bounds::of(u), grid, config).dt;
      },
      py::arg("u"), py::arg("grid"), py::arg("config") = SchemeConfig{});

  m.def(
      "step",
      [](const std::vector<double>& u, const Grid1D& grid, double dt, const SchemeConfig& config,
         std::optional<std::pair<double, double>> bounds) {
        const Bounds b = bounds ? Bounds{bounds->first, bounds->second} : Bounds::of(u);
        CellState s;
        s.values = u;
        const StepResult r = el_fv_step_dt(s, grid, b, dt, config);
        return py::make_tuple(r.state.values, diagnostics_dict(r.diagnostics));
      },
      py::arg("u"), py::arg("grid"), py::arg("dt"), py::arg("config") = SchemeConfig{},
      py::arg("bounds") = py::none(),
      "One EL FV step with an explicit dt. bounds is (a, b); the data bounds when omitted.");

  m.def(
      "total_variation", [](const std::vector<double>& u, Boundary b) { return total_variation(u, b); },
      py::arg("u"), py::arg("boundary") = Boundary::Periodic);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("name", &ExperimentConfig::name)
      .def_property(
          "problem", [](const ExperimentConfig& c) { return to_string(c.problem); },
          [](ExperimentConfig& c, const std::string& s) { c.problem = parse_problem(s); })
      .def_readwrite("n_cells", &ExperimentConfig::n_cells)
      .def_readwrite("n_y", &ExperimentConfig::n_y)
      .def_readwrite("c_factor", &ExperimentConfig::c_factor)
      .def_readwrite("cfl", &ExperimentConfig::cfl)
      .def_readwrite("t_final", &ExperimentConfig::t_final)
      .def_readwrite("merging_mode", &ExperimentConfig::merging_mode)
      .def_readwrite("bounds_mode", &ExperimentConfig::bounds_mode)
      .def_readwrite("error_norm", &ExperimentConfig::error_norm)
      .def_readwrite("snapshot_times", &ExperimentConfig::snapshot_times)
      .def_readwrite("n_list", &ExperimentConfig::n_list)
      .def_readwrite("c_values", &ExperimentConfig::c_values);

  m.def("parse_config", &parse_config, py::arg("text"));
  m.def("load_config", &load_config, py::arg("path"));

  py::class_<RunSummary>(m, "RunSummary")
      .def_readonly("name", &RunSummary::name)
      .def_readonly("steps", &RunSummary::steps)
      .def_readonly("t_final", &RunSummary::t_final)
      .def_readonly("dt", &RunSummary::dt)
      .def_readonly("c_factor", &RunSummary::c_factor)
      .def_readonly("cfl", &RunSummary::cfl)
      .def_readonly("guaranteed", &RunSummary::guaranteed)
      .def_readonly("mass_drift", &RunSummary::mass_drift)
      .def_readonly("error", &RunSummary::error)
      .def_readonly("violations", &RunSummary::violations)
      .def_readonly("files", &RunSummary::files)
      .def_property_readonly("final", [](const RunSummary& s) {
        return s.final_2d.values.empty() ? s.final_1d.values : s.final_2d.values;
      })
      .def_property_readonly("history", [](const RunSummary& s) {
        py::list out;
        for (const auto& d : s.history) out.append(diagnostics_dict(d));
        return out;
      })
      .def_property_readonly("exit_code", &RunSummary::exit_code);

  m.def("run_experiment", &run_experiment, py::arg("config"), py::arg("out_dir") = std::filesystem::path{},
        py::call_guard<py::gil_scoped_release>());

  m.def(
      "convergence_study",
      [](const ExperimentConfig& base, const std::vector<int>& n_list) {
        py::list out;
        for (const auto& r : convergence_study(base, n_list)) out.append(py::make_tuple(r.n, r.error, r.order));
        return out;
      },
      py::arg("config"), py::arg("n_list"), "[(N, error, order or None)].");

  m.def(
      "verify_theory",
      [](long instances, std::uint64_t seed, int grid_steps) {
        const TheoryReport r = verify_theory(instances, seed, grid_steps);
        py::dict out;
        out["instances"] = r.rows.size();
        out["all_ok"] = r.all_ok();
        out["type4_checked"] = r.type4_checked;
        out["type4_failures"] = r.type4_failures;
        return out;
      },
      py::arg("instances") = 1000, py::arg("seed") = 1, py::arg("grid_steps") = 200);
}

#include "hyasync/common.hpp"
#include "hyasync/config.hpp"
#include "hyasync/estimators.hpp"
#include "hyasync/mc.hpp"
#include "hyasync/report_json.hpp"
#include "hyasync/timescales.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace hyasync;

namespace
{

// Reports go through the JSON views so Python sees the same keys as the CLI.
py::object to_python(const nlohmann::json& j)
{
  return py::module_::import("json").attr("loads")(dump_json(j, -1));
}

nlohmann::json from_python(const py::object& o)
{
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

RunConfig config_of(const py::object& o)
{
  RunConfig cfg = parse_run_config(o.is_none() ? nlohmann::json::object() : from_python(o));
  finalize(cfg);
  return cfg;
}

SchemePair pair_of(std::vector<double> tx, std::vector<double> ty)
{
  SchemePair p = SchemePair::from_times(std::move(tx), std::move(ty));
  p.validate();
  return p;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
  m.doc() = "Covariation estimation for asynchronously observed pairs";
  m.attr("__version__") = kVersion;

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<ComputationError>(m, "ComputationError", PyExc_RuntimeError);

  m.def(
      "sync_grid",
      [](std::vector<double> tx, std::vector<double> ty) {
        return to_python(to_json(build_sync_grid(pair_of(std::move(tx), std::move(ty)))));
      },
      py::arg("times_x"), py::arg("times_y"));

  m.def(
      "hy_estimate",
      [](std::vector<double> tx, std::vector<double> x, std::vector<double> ty,
         std::vector<double> y) {
        return hy_estimate(pair_of(std::move(tx), std::move(ty)), x, y);
      },
      py::arg("times_x"), py::arg("x"), py::arg("times_y"), py::arg("y"));

  m.def(
      "hy_bruteforce",
      [](std::vector<double> tx, std::vector<double> x, std::vector<double> ty,
         std::vector<double> y) {
        return hy_bruteforce(pair_of(std::move(tx), std::move(ty)), x, y);
      },
      py::arg("times_x"), py::arg("x"), py::arg("times_y"), py::arg("y"));

  m.def(
      "refresh_previous_tick",
      [](std::vector<double> tx, std::vector<double> x, std::vector<double> ty,
         std::vector<double> y) {
        return refresh_previous_tick(pair_of(std::move(tx), std::move(ty)), x, y);
      },
      py::arg("times_x"), py::arg("x"), py::arg("times_y"), py::arg("y"));

  m.def(
      "fixed_grid_previous_tick",
      [](std::vector<double> tx, std::vector<double> x, std::vector<double> ty,
         std::vector<double> y, double width) {
        return fixed_grid_previous_tick(pair_of(std::move(tx), std::move(ty)), x, y, width);
      },
      py::arg("times_x"), py::arg("x"), py::arg("times_y"), py::arg("y"), py::arg("grid_width"));

  m.def(
      "estimate",
      [](std::vector<double> tx, std::vector<double> x, std::vector<double> ty,
         std::vector<double> y, const py::object& config) {
        const RunConfig cfg = config_of(config);
        const SchemePair p = pair_of(std::move(tx), std::move(ty));
        return to_python(to_json(estimate(p, x, y, cfg.estimate)));
      },
      py::arg("times_x"), py::arg("x"), py::arg("times_y"), py::arg("y"),
      py::arg("config") = py::none());

  m.def(
      "simulate",
      [](const py::object& config) {
        const RunConfig cfg = config_of(config);
        const SchemePair p = generate(cfg.scheme, derive_seed(cfg.seed, 0, 1));
        const PathBundle b = simulate_paths(p, cfg.coeffs, derive_seed(cfg.seed, 0, 2));
        py::dict out;
        out["times_x"] = p.times_x;
        out["x"] = b.observed_x();
        out["times_y"] = p.times_y;
        out["y"] = b.observed_y();
        out["truth"] = b.true_qcov_T;
        return out;
      },
      py::arg("config") = py::none());

  m.def(
      "poisson_qcv_limits",
      [](double t1, double t2) {
        const QcvSlopes s = poisson_qcv_limits(t1, t2);
        return py::make_tuple(s.g, s.f, s.h);
      },
      py::arg("theta1"), py::arg("theta2"));

  m.def(
      "qcv_slopes",
      [](std::vector<double> tx, std::vector<double> ty) {
        const SyncGrid g = build_sync_grid(pair_of(std::move(tx), std::move(ty)));
        return to_python(to_json(qcv_slopes(qcv_curves(g))));
      },
      py::arg("times_x"), py::arg("times_y"));

  m.def(
      "run_mc",
      [](const py::object& config) {
        const RunConfig cfg = config_of(config);
        McSummary s;
        {
          py::gil_scoped_release release;
          s = run_study(cfg.mc);
        }
        return to_python(to_json(s));
      },
      py::arg("config"));
}

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "twkde/asymptotics.hpp"
#include "twkde/errors.hpp"
#include "twkde/gof.hpp"
#include "twkde/kde.hpp"
#include "twkde/scenarios.hpp"
#include "twkde/tuning.hpp"
#include "twkde/tweedie.hpp"
#include "twkde/version.hpp"

#include <optional>

namespace py = pybind11;
using namespace twkde;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double>
to_vector(const Array& a)
{
  if (a.ndim() != 1)
    throw py::value_error("expected a one-dimensional array");
  return std::vector<double>(a.data(), a.data() + a.size());
}

Array
to_array(const std::vector<double>& v)
{
  Array out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

TweedieKernelParams
kernel_params(double x, double h, double p)
{
  return TweedieKernelParams(x, h, PowerParam(p));
}

EvaluationGrid
grid_for(const SemicontinuousSample& s, const std::optional<Array>& grid)
{
  if (grid)
    return EvaluationGrid::from_points(to_vector(*grid));
  return default_grid(s);
}

py::dict
selection_dict(const SelectionResult& r)
{
  const auto np = static_cast<py::ssize_t>(r.grids.p_grid.size());
  const auto nh = static_cast<py::ssize_t>(r.grids.h_grid.size());
  py::array_t<double> table({ np, nh });
  std::copy(r.cv_table.begin(), r.cv_table.end(), table.mutable_data());
  py::dict d;
  d["p_star"] = r.p_star;
  d["h_star"] = r.h_star;
  d["p_grid"] = to_array(r.grids.p_grid);
  d["h_grid"] = to_array(r.grids.h_grid);
  d["cv_table"] = table;
  d["failures"] = r.failures.size();
  return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
  m.doc() = "Tweedie kernel density estimation for semicontinuous data";
  m.attr("__version__") = twkde::version;

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<NonConvergence>(m, "NonConvergence", base.ptr());
  py::register_exception<AllZeros>(m, "AllZeros", base.ptr());
  py::register_exception<DegenerateSample>(m, "DegenerateSample", base.ptr());
  py::register_exception<GridMismatch>(m, "GridMismatch", base.ptr());
  py::register_exception<GridTooNarrow>(m, "GridTooNarrow", base.ptr());

  // kernel
  m.def("wright_series", [](double a, double alpha) { return wright_series(a, alpha); }, py::arg("a"), py::arg("alpha"));
  m.def(
    "log_subdensity",
    [](double t, double x, double h, double p) { return log_subdensity(t, kernel_params(x, h, p)); },
    py::arg("t"), py::arg("x"), py::arg("h"), py::arg("p"));
  m.def(
    "kernel",
    [](double t, double x, double h, double p) { return kernel_eval(t, kernel_params(x, h, p)).value; },
    "Atom probability at t = 0, subdensity for t > 0.",
    py::arg("t"), py::arg("x"), py::arg("h"), py::arg("p"));
  m.def(
    "point_mass",
    [](double x, double h, double p) { return point_mass(kernel_params(x, h, p)); },
    py::arg("x"), py::arg("h"), py::arg("p"));
  m.def(
    "unit_deviance",
    [](double u, double x, double p) { return unit_deviance(u, x, PowerParam(p)); },
    py::arg("u"), py::arg("x"), py::arg("p"));
  m.def(
    "dispersion_from_zero_mass",
    [](double mu, double p, double p0) { return dispersion_from_zero_mass(mu, PowerParam(p), p0); },
    py::arg("mu"), py::arg("p"), py::arg("p0"));
  m.def(
    "sample",
    [](double mu, double phi, double p, std::size_t n, std::uint64_t seed) {
      return to_array(sample(kernel_params(mu, phi, p), n, seed));
    },
    py::arg("mu"), py::arg("phi"), py::arg("p"), py::arg("n"), py::arg("seed"));

  // estimator
  m.def(
    "estimate",
    [](const Array& data, double h, double p, std::optional<Array> grid) {
      const SemicontinuousSample s(to_vector(data));
      const auto est = evaluate_grid(s, grid_for(s, grid), h, PowerParam(p));
      return py::make_tuple(to_array(std::vector<double>(est.grid.points().begin(), est.grid.points().end())),
                            to_array(est.values),
                            est.zero_mass);
    },
    "Returns (grid, g_hat, p0_hat); the grid defaults to 512 points on (0, 1.1 max].",
    py::arg("data"), py::arg("h"), py::arg("p"), py::arg("grid") = py::none());
  m.def(
    "evaluate",
    [](const Array& data, double x, double h, double p) {
      return evaluate(SemicontinuousSample(to_vector(data)), x, h, PowerParam(p));
    },
    py::arg("data"), py::arg("x"), py::arg("h"), py::arg("p"));
  m.def(
    "lscv",
    [](const Array& data, double h, double p, std::optional<Array> grid) {
      const SemicontinuousSample s(to_vector(data));
      return lscv_criterion(s, grid_for(s, grid), h, PowerParam(p)).value;
    },
    py::arg("data"), py::arg("h"), py::arg("p"), py::arg("grid") = py::none());
  m.def(
    "select",
    [](const Array& data, std::size_t n_p, std::size_t n_h) {
      return selection_dict(select_for(SemicontinuousSample(to_vector(data)), TuningOptions{ n_p, n_h, {}, {}, {} }));
    },
    py::arg("data"), py::arg("n_p") = default_power_count, py::arg("n_h") = default_bandwidth_count);

  // asymptotics on the simulation targets
  m.def(
    "h_opt_mise",
    [](const std::string& scenario, double p0, double p, double n) {
      return h_opt_mise(PowerParam(p), true_positive_density(parse_scenario(scenario), p0), n);
    },
    py::arg("scenario"), py::arg("p0"), py::arg("p"), py::arg("n"));

  // experiments
  m.def(
    "simulate",
    [](const std::string& scenario, std::size_t n, double p0, std::size_t reps, std::uint64_t seed, std::size_t threads) {
      ScenarioConfig cfg{ parse_scenario(scenario), n, p0, seed, reps };
      ReplicationSummary s;
      {
        py::gil_scoped_release release;
        s = run_monte_carlo(cfg, {}, threads);
      }
      std::vector<double> ise;
      for (const auto& r : s.replicates)
        ise.push_back(r.ok ? r.ise : std::nan(""));
      py::dict d;
      d["mean_ise"] = s.mean_ise;
      d["sd_ise"] = s.sd_ise;
      d["mean_iae"] = s.mean_iae;
      d["sd_iae"] = s.sd_iae;
      d["failures"] = s.failures;
      d["ise"] = to_array(ise);
      return d;
    },
    py::arg("scenario"), py::arg("n") = 100, py::arg("p0") = 0.3, py::arg("reps") = 100, py::arg("seed") = 1,
    py::arg("threads") = 1);
  m.def(
    "gof",
    [](const Array& data, double mu, double phi, double p, std::size_t B, double level, const std::string& policy,
       std::uint64_t seed, std::size_t threads) {
      GofConfig cfg;
      cfg.null = { mu, phi, p };
      cfg.B = B;
      cfg.level = level;
      cfg.policy = parse_gof_policy(policy);
      cfg.threads = threads;
      const SemicontinuousSample s(to_vector(data));
      GofResult r;
      {
        py::gil_scoped_release release;
        r = run_test(s, cfg, seed);
      }
      py::dict d;
      d["statistic"] = r.statistic;
      d["critical_value"] = r.critical_value;
      d["reject"] = r.reject;
      d["calibration"] = to_array(r.calibration);
      d["p_star"] = r.p_star;
      d["h_star"] = r.h_star;
      return d;
    },
    py::arg("data"), py::arg("mu"), py::arg("phi"), py::arg("p"), py::arg("B") = 500, py::arg("level") = 0.05,
    py::arg("policy") = "reselect", py::arg("seed") = 1, py::arg("threads") = 1);
}

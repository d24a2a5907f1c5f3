#include <map>
#include <string>
#include <vector>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cv2x/analytic.hpp"
#include "cv2x/config.hpp"
#include "cv2x/engine.hpp"
#include "cv2x/output.hpp"
#include "cv2x/phy.hpp"
#include "cv2x/sweep.hpp"

namespace py = pybind11;
using namespace cv2x;

namespace {

using KeyValues = std::map<std::string, std::string>;

ScenarioConfig from_key_values(const KeyValues& kv, ScenarioConfig base = {}) {
  for (const auto& [k, v] : kv) set_field(base, k, v);
  return base;
}

AccessMode parse_mode(const std::string& mode) {
  if (mode == "oma") return AccessMode::Oma;
  if (mode == "noma") return AccessMode::Noma;
  throw ConfigError("access_mode", "expected oma or noma, got '" + mode + "'");
}

template <class T>
py::array_t<T> column(const std::vector<engine::SlotReport>& series, T engine::SlotReport::*field) {
  py::array_t<T> out(static_cast<py::ssize_t>(series.size()));
  auto view = out.template mutable_unchecked<1>();
  for (std::size_t t = 0; t < series.size(); ++t) view(static_cast<py::ssize_t>(t)) = series[t].*field;
  return out;
}

py::dict series_columns(const std::vector<engine::SlotReport>& s) {
  py::dict d;
  d["slot"] = column(s, &engine::SlotReport::slot);
  d["phi_bar"] = column(s, &engine::SlotReport::phi_bar);
  d["delta_t"] = column(s, &engine::SlotReport::delta_t);
  d["tx"] = column(s, &engine::SlotReport::tx);
  d["rx_success"] = column(s, &engine::SlotReport::rx_success);
  d["rx_attempts"] = column(s, &engine::SlotReport::rx_attempts);
  d["collisions"] = column(s, &engine::SlotReport::collisions);
  d["drops"] = column(s, &engine::SlotReport::drops);
  return d;
}

py::tuple run(const KeyValues& kv, bool keep_series) {
  const auto cfg = ValidatedConfig::validate(from_key_values(kv));
  engine::SimulationReport rep;
  {
    py::gil_scoped_release release;
    rep = engine::run(cfg, {.keep_series = keep_series});
  }
  return py::make_tuple(output::summary_json(rep.summary).dump(), series_columns(rep.series));
}

std::vector<py::tuple> run_grid(const KeyValues& kv, const std::vector<std::pair<std::string, std::vector<std::string>>>& axes,
                             const std::vector<std::uint64_t>& seeds, int jobs) {
  const auto base = from_key_values(kv);
  std::vector<sweep::SweepAxis> ax;
  for (const auto& [field, values] : axes) ax.push_back({field, values});
  std::vector<sweep::SweepCell> cells;
  {
    py::gil_scoped_release release;
    cells = sweep::run_sweep(base, ax, seeds, jobs);
  }
  std::vector<py::tuple> out;
  for (const auto& c : cells) {
    py::dict params;
    for (const auto& [k, v] : c.params) params[py::str(k)] = v;
    out.push_back(py::make_tuple(params, c.seed, c.summary ? output::summary_json(*c.summary).dump() : std::string{},
                                 c.error));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_cv2x, m) {
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.attr("__version__") = CV2X_VERSION;
  m.def("default_config", [] { return to_key_values(ScenarioConfig{}); });
  m.def("reference_scenario", [](int nv, int rri, const std::string& mode) {
    return to_key_values(reference_scenario(nv, rri, parse_mode(mode)));
  });
  m.def("validate", [](const KeyValues& kv) {
    return to_key_values(ValidatedConfig::validate(from_key_values(kv)).config());
  });
  m.def("run", &run, py::arg("config"), py::arg("keep_series") = true);
  m.def("sweep", &run_grid, py::arg("config"), py::arg("axes"), py::arg("seeds"), py::arg("jobs") = 1);
  m.def("sinr_threshold", &phy::sinr_threshold, py::arg("bits"), py::arg("bandwidth_hz"), py::arg("slot_s"));
  m.def(
      "p_no_collision",
      [](double pi, double p_rk, int csr, int num_vehicles, int window) {
        return analytic::p_no_collision({pi, p_rk, csr, num_vehicles, window});
      },
      py::arg("pi"), py::arg("p_rk"), py::arg("csr"), py::arg("num_vehicles"), py::arg("window"));
}

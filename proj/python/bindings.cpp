#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "aatomo/config.hpp"
#include "aatomo/reconstruct.hpp"
#include "aatomo/scenarios.hpp"
#include "aatomo/transport.hpp"

namespace py = pybind11;
using namespace aatomo;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

RunConfig make_config(const py::dict& overrides) {
  RunConfig cfg;
  for (auto [k, v] : overrides) set_config_value(cfg, py::str(k), py::str(v));
  cfg.validate();
  return cfg;
}

Array to_array(const Sinogram& g) {
  Array out({g.n_boundary, g.n_angles});
  std::copy(g.values.begin(), g.values.end(), out.mutable_data());
  return out;
}

Sinogram from_array(const Array& a, SinogramTag tag, const RunConfig& cfg) {
  if (a.ndim() != 2) throw ConfigError("sinogram must be a 2-D array (boundary nodes x directions)");
  Sinogram g(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)), tag);
  g.ray_step = cfg.ray_step;
  std::copy(a.data(), a.data() + a.size(), g.values.begin());
  return g;
}

py::dict metrics_dict(const Metrics& m) {
  py::dict d;
  for (const auto& [k, v] : m.entries) d[py::str(k)] = v;
  return d;
}

py::dict field_dict(const VectorFieldGrid& F) {
  std::vector<double> x, y, f1, f2;
  for (std::size_t idx : F.grid->nodes()) {
    if (!F.ok(idx)) continue;
    const cplx z = F.grid->point(idx);
    x.push_back(z.real());
    y.push_back(z.imag());
    f1.push_back(F.f1[idx]);
    f2.push_back(F.f2[idx]);
  }
  py::dict d;
  d["x"] = py::array(py::cast(x));
  d["y"] = py::array(py::cast(y));
  d["F1"] = py::array(py::cast(f1));
  d["F2"] = py::array(py::cast(f2));
  return d;
}

py::dict simulate(const std::string& scenario, const py::dict& overrides) {
  const RunConfig cfg = make_config(overrides);
  const Scenario sc = make_scenario(scenario, cfg);
  py::dict out;
  if (sc.F)
    out["doppler"] = to_array(forward_doppler(*sc.F, sc.a.get(), cfg.n_boundary, cfg.n_angles, cfg.transport()));
  if (sc.f) out["xray"] = to_array(forward_xray(*sc.f, sc.a.get(), cfg.n_boundary, cfg.n_angles, cfg.transport()));
  return out;
}

py::dict check_range(const Array& sinogram, const py::dict& overrides) {
  const RunConfig cfg = make_config(overrides);
  const Sinogram g = from_array(sinogram, SinogramTag::doppler, cfg);
  RangeReport r;
  if (cfg.attenuated()) {
    const IntegratingFactor h(make_attenuation(cfg), cfg.h_options());
    r = check_range_att(g, h, cfg);
  } else {
    r = check_range_nonatt(g, cfg);
  }
  py::dict d = metrics_dict(r.metrics());
  d["pass"] = r.pass();
  d["failed"] = r.failed;
  return d;
}

py::dict reconstruct(const Array& sinogram, const py::dict& overrides, const std::string& truth) {
  const RunConfig cfg = make_config(overrides);
  const Sinogram g = from_array(sinogram, SinogramTag::doppler, cfg);
  ReconstructionReport rep;
  {
    py::gil_scoped_release release;
    rep = cfg.attenuated() ? reconstruct_att(g, make_attenuation(cfg), cfg) : reconstruct_nonatt(g, cfg);
  }
  Metrics m = rep.metrics;
  if (rep.accepted && !truth.empty()) {
    const Scenario sc = make_scenario(truth, cfg);
    if (sc.F) {
      const VectorFieldGrid t = sample(*sc.F, rep.F.grid);
      m.set("relative_l2_error", relative_l2_error(rep.F, t, 1.0));
      m.set("curl_defect", curl_defect(rep.F, t));
    }
  }
  py::dict d;
  d["accepted"] = rep.accepted;
  d["rejection"] = rep.rejection;
  d["metrics"] = metrics_dict(m);
  if (rep.accepted) d["field"] = field_dict(rep.F);
  return d;
}

double confusion_gap(std::uint64_t seed, const py::dict& overrides) {
  const RunConfig cfg = make_config(overrides);
  const ScalarFieldPtr a = make_attenuation(cfg);
  if (!a) throw ConfigError("the confusion identity needs an attenuation");
  const ConfusionPair p = confusion_field(random_potential(seed), a);
  const Sinogram gd = forward_doppler(*p.F, a.get(), cfg.n_boundary, cfg.n_angles, cfg.transport());
  const Sinogram gx = forward_xray(*p.f, a.get(), cfg.n_boundary, cfg.n_angles, cfg.transport());
  double diff = 0.0;
  for (std::size_t i = 0; i < gd.values.size(); ++i) diff = std::max(diff, std::abs(gd.values[i] - gx.values[i]));
  return diff;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Attenuated Doppler and X-ray tomography on the unit disk";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_IOError);

  m.def("default_config", [] { return dump_config(RunConfig{}); }, "Default configuration as key = value text.");
  m.def("config_text", [](const py::dict& o) { return dump_config(make_config(o)); }, py::arg("overrides") = py::dict());
  m.def("scenario_names", &scenario_names);
  m.def("simulate", &simulate, py::arg("scenario"), py::arg("overrides") = py::dict(),
        "Sinograms of a scenario as (N_b, N_phi) arrays keyed 'doppler' and/or 'xray'.");
  m.def("check_range", &check_range, py::arg("sinogram"), py::arg("overrides") = py::dict());
  m.def("reconstruct", &reconstruct, py::arg("sinogram"), py::arg("overrides") = py::dict(),
        py::arg("truth") = std::string(), "Reconstruct F; pass a scenario name as truth to get error metrics.");
  m.def("confusion_gap", &confusion_gap, py::arg("seed"), py::arg("overrides") = py::dict(),
        "sup |Doppler(-grad psi) - X-ray(a psi)| for a random potential psi.");
}

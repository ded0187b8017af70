#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qst/output.hpp"
#include "qst/version.hpp"

namespace py = pybind11;
using namespace qst;

namespace {

RunConfig config_from_dict(const py::dict& overrides) {
    RunConfig config = default_config();
    for (auto item : overrides) {
        const std::string key = py::cast<std::string>(item.first);
        const std::string value = py::cast<std::string>(py::str(item.second));
        apply_override(config, key, value);
    }
    return config;
}

py::dict schedule_dict(const ProtocolSchedule& s) {
    py::dict d;
    d["lambda1_mhz"] = angular_to_mhz(s.lambda1);
    d["lambda2_mhz"] = angular_to_mhz(s.lambda2);
    d["lambda2_over_lambda1"] = s.mismatch_ratio();
    d["t1_ns"] = s.t1;
    d["t2_ns"] = s.t2;
    d["total_ns"] = s.total_time();
    return d;
}

py::dict transfer_dict(const TransferResult& r) {
    py::dict d;
    d["fidelity"] = r.fidelity;
    d["schedule"] = schedule_dict(r.schedule);
    d["q_a"] = r.q_a;
    d["q_b"] = r.q_b;
    d["peak_photon"] = r.peak_photon;
    d["min_eigenvalue"] = std::min(r.stage1.min_eigenvalue(), r.stage2.min_eigenvalue());
    d["max_trace_error"] = std::max(r.stage1.max_trace_error(), r.stage2.max_trace_error());
    return d;
}

py::dict sweep_dict(const SweepResult& r) {
    py::dict d;
    d["kind"] = std::string(to_string(r.kind));
    d["columns"] = r.columns;
    py::list rows;
    for (const auto& row : r.rows)
        rows.append(py::make_tuple(row.x1, row.x2, row.fidelity, row.lambda_ratio, row.t1_ns,
                                   row.t2_ns, row.peak_photon, row.min_eigenvalue,
                                   row.max_trace_error));
    d["rows"] = rows;
    d["min_fidelity"] = r.min_fidelity;
    d["mean_fidelity"] = r.mean_fidelity;
    d["max_fidelity"] = r.max_fidelity;
    d["notes"] = r.notes;
    return d;
}

SweepResult run_sweep(const py::dict& overrides, SweepKind kind) {
    const RunConfig config = config_from_dict(overrides);
    const SweepSpec spec = SweepSpec::from_config(config, kind);
    switch (kind) {
        case SweepKind::detuning: return sweep_detuning(spec);
        case SweepKind::state_grid: return sweep_state_grid(spec);
        case SweepKind::coupling: return sweep_coupling(spec);
        case SweepKind::convergence: return convergence_study(spec);
    }
    throw std::logic_error("unreachable");
}

}  // namespace

PYBIND11_MODULE(_qst, m) {
    m.doc() = "Dissipative two-qutrit state-transfer simulator";
    m.attr("__version__") = std::string(version_string);

    py::enum_<Level>(m, "Level")
        .value("g", Level::g)
        .value("e", Level::e)
        .value("f", Level::f);
    py::enum_<Factor>(m, "Factor")
        .value("qutrit1", Factor::qutrit1)
        .value("qutrit2", Factor::qutrit2)
        .value("res_a", Factor::res_a)
        .value("res_b", Factor::res_b);

    py::class_<SpaceLayout>(m, "SpaceLayout")
        .def(py::init<int>(), py::arg("n_ph"))
        .def_readonly("n_ph", &SpaceLayout::n_ph)
        .def_property_readonly("dim", &SpaceLayout::dim)
        .def("index",
             [](const SpaceLayout& l, int q1, int q2, int na, int nb) {
                 return l.index(q1, q2, na, nb);
             },
             py::arg("q1"), py::arg("q2"), py::arg("na"), py::arg("nb"));

    // operator construction
    m.def("annihilation", &annihilation, py::arg("n_levels"),
          "Truncated bosonic lowering operator, <n-1|a|n> = sqrt(n)");
    m.def("qutrit_transition", &qutrit_transition, py::arg("from_level"), py::arg("to_level"),
          "3x3 |to><from| in basis order (g, e, f)");
    m.def("embed",
          [](const ComplexMatrix& op, Factor factor, const SpaceLayout& layout) {
              return embed(op, factor, layout);
          },
          py::arg("local_op"), py::arg("factor"), py::arg("layout"),
          "Extend a single-factor operator to the composite space");

    // configuration-driven pipelines; overrides use the config-file keys
    m.def("default_config",
          []() {
              py::dict d;
              for (auto& [key, value] : config_echo(default_config())) {
                  std::string v = value;
                  const std::string suffix = " (default)";
                  if (v.size() >= suffix.size() &&
                      v.compare(v.size() - suffix.size(), suffix.size(), suffix) == 0)
                      v.resize(v.size() - suffix.size());
                  d[py::str(key)] = v;
              }
              return d;
          },
          "All configuration keys with their default values (as strings)");
    m.def("schedule",
          [](const py::dict& overrides) {
              const RunConfig config = config_from_dict(overrides);
              return schedule_dict(build_schedule(device_from(config)));
          },
          py::arg("overrides") = py::dict(),
          "Protocol timing (lambda rates, t1, t2) for a configuration");
    m.def("run_transfer",
          [](const py::dict& overrides) {
              const RunConfig config = config_from_dict(overrides);
              return transfer_dict(run_transfer(
                  state_from(config), device_from(config), rates_from(config),
                  integrator_from(config), layout_from(config),
                  TransferOptions{config.include_crosstalk, Stage1Kind::full, false}));
          },
          py::arg("overrides") = py::dict(),
          "Run the two-stage protocol once; returns fidelity and diagnostics");
    m.def("sweep_detuning",
          [](const py::dict& o) { return sweep_dict(run_sweep(o, SweepKind::detuning)); },
          py::arg("overrides") = py::dict());
    m.def("sweep_states",
          [](const py::dict& o) { return sweep_dict(run_sweep(o, SweepKind::state_grid)); },
          py::arg("overrides") = py::dict());
    m.def("sweep_coupling",
          [](const py::dict& o) { return sweep_dict(run_sweep(o, SweepKind::coupling)); },
          py::arg("overrides") = py::dict());
    m.def("converge",
          [](const py::dict& o) { return sweep_dict(run_sweep(o, SweepKind::convergence)); },
          py::arg("overrides") = py::dict());
    m.def("validate",
          [](const py::dict& overrides) {
              py::list out;
              for (const auto& c : validation_suite(config_from_dict(overrides))) {
                  py::dict d;
                  d["name"] = c.name;
                  d["passed"] = c.passed;
                  d["measured"] = c.measured;
                  d["bound"] = c.bound;
                  d["detail"] = c.detail;
                  out.append(d);
              }
              return out;
          },
          py::arg("overrides") = py::dict(),
          "Run the physics invariant suite; returns one record per check");
}

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mgsched/audit.hpp"
#include "mgsched/drp.hpp"
#include "mgsched/milp/mps.hpp"
#include "mgsched/pipeline.hpp"

namespace py = pybind11;
using namespace mgsched;

namespace {

ScenarioSet scenarios_from_config(const MgConfig& cfg) { return cfg.make_scenarios(); }

py::dict solution_dict(const milp::Solution& sol, const milp::MilpModel& model) {
    py::dict d;
    d["status"] = milp::to_string(sol.status);
    d["objective"] = sol.objective;
    d["bound"] = sol.bound;
    d["gap"] = sol.gap;
    d["nodes"] = sol.nodes;
    d["wall_sec"] = sol.wall_sec;
    py::dict values;
    if (!sol.x.empty())
        for (int j = 0; j < model.n_vars(); ++j)
            values[py::str(model.vars[j].name)] = sol.x[j];
    d["values"] = values;
    return d;
}

} // namespace

PYBIND11_MODULE(_mgsched, m) {
    m.doc() = "Risk-constrained microgrid day-ahead scheduling toolkit";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<SolveError>(m, "SolveError");
    py::register_exception<BridgeError>(m, "BridgeError");

    py::enum_<DistKind>(m, "DistKind")
        .value("Normal", DistKind::Normal)
        .value("Beta", DistKind::Beta)
        .value("Weibull", DistKind::Weibull);

    py::class_<DistributionSpec>(m, "DistributionSpec")
        .def_static("normal", &DistributionSpec::normal, py::arg("mu"), py::arg("sigma2"))
        .def_static("beta", &DistributionSpec::beta_ab, py::arg("alpha"), py::arg("beta"),
                    py::arg("a") = 0.0, py::arg("b") = 1.0)
        .def_static("weibull", &DistributionSpec::weibull, py::arg("k1"), py::arg("c1"))
        .def_readonly("kind", &DistributionSpec::kind)
        .def("mean", &DistributionSpec::mean)
        .def("variance", &DistributionSpec::variance)
        .def("__repr__", [](const DistributionSpec& d) {
            switch (d.kind) {
            case DistKind::Normal:
                return "Normal(mu=" + std::to_string(d.mu) + ", sigma2=" + std::to_string(d.sigma2) + ")";
            case DistKind::Beta:
                return "Beta(alpha=" + std::to_string(d.alpha) + ", beta=" + std::to_string(d.beta)
                     + ", a=" + std::to_string(d.a) + ", b=" + std::to_string(d.b) + ")";
            case DistKind::Weibull:
                return "Weibull(k1=" + std::to_string(d.k1) + ", c1=" + std::to_string(d.c1) + ")";
            }
            return std::string("DistributionSpec(?)");
        });

    m.def("pdf_beta", &pdf_beta, py::arg("y"), py::arg("spec"));
    m.def("pdf_weibull", &pdf_weibull, py::arg("v"), py::arg("spec"));
    m.def("pdf_normal", &pdf_normal, py::arg("q"), py::arg("spec"));

    py::class_<Rng>(m, "Rng").def(py::init<std::uint64_t>(), py::arg("seed"));
    m.def("sample", [](const DistributionSpec& spec, Rng& rng) { return sample(spec, rng); },
          py::arg("spec"), py::arg("rng"));
    m.def("fit_moments",
          [](const std::vector<double>& samples, DistKind kind) {
              return fit_moments(samples, kind);
          },
          py::arg("samples"), py::arg("kind"));

    py::class_<Scenario>(m, "Scenario")
        .def_readonly("load", &Scenario::load)
        .def_readonly("price_sell", &Scenario::price_sell)
        .def_readonly("price_buy", &Scenario::price_buy)
        .def_readonly("pv_max", &Scenario::pv_max)
        .def_readonly("wt_max", &Scenario::wt_max)
        .def_readonly("prob", &Scenario::prob);

    py::class_<ScenarioSet>(m, "ScenarioSet")
        .def_readonly("scenarios", &ScenarioSet::scenarios)
        .def_readonly("seed", &ScenarioSet::seed)
        .def("horizon", &ScenarioSet::horizon)
        .def("__len__", &ScenarioSet::size);

    py::class_<MgConfig>(m, "MgConfig")
        .def_property_readonly("horizon", [](const MgConfig& c) { return c.horizon; })
        .def_property_readonly("n_scenarios", [](const MgConfig& c) { return c.n_scenarios; })
        .def_property_readonly("seed", [](const MgConfig& c) { return c.seed; })
        .def("truncated", &MgConfig::truncated, py::arg("horizon"))
        .def("with_participation", &MgConfig::with_participation, py::arg("participation"))
        .def("to_json", &config_to_json)
        .def("make_scenarios", &scenarios_from_config);

    m.def("default_config", &default_config);
    m.def("load_config", [](const std::string& path) { return load_config(path); }, py::arg("path"));
    m.def("config_from_json",
          [](const std::string& text) { return config_from_json(text); },
          py::arg("text"));

    m.def("write_scenario_bundle", &write_scenario_bundle, py::arg("scenarios"), py::arg("dir"));

    m.def("responsive_load",
          [](const std::vector<double>& pl0, const std::vector<double>& rho, const MgConfig& cfg) {
              return responsive_load(pl0, rho, cfg.drp);
          },
          py::arg("pl0"), py::arg("rho"), py::arg("config"));
    m.def("drp_cost",
          [](const std::vector<double>& shift_abs, const std::vector<double>& incentive) {
              return drp_cost(shift_abs, incentive);
          },
          py::arg("pl_shift_abs"), py::arg("incentive"));

    m.def("downside_risk", &downside_risk, py::arg("profit"), py::arg("target"));
    m.def("expected_downside_risk",
          [](const std::vector<double>& risks, const std::vector<double>& probs) {
              return expected_downside_risk(risks, probs);
          },
          py::arg("risks"), py::arg("probs"));
    m.def("edr_bound", &edr_bound, py::arg("lambda_p"), py::arg("edr_baseline"));

    // Small generic MILP surface for scripting and smoke tests.
    py::enum_<milp::Rel>(m, "Rel")
        .value("Le", milp::Rel::Le)
        .value("Eq", milp::Rel::Eq)
        .value("Ge", milp::Rel::Ge);
    py::enum_<milp::Sense>(m, "Sense")
        .value("Max", milp::Sense::Max)
        .value("Min", milp::Sense::Min);

    py::class_<milp::MilpModel>(m, "MilpModel")
        .def(py::init<>())
        .def_readwrite("name", &milp::MilpModel::name)
        .def_readwrite("sense", &milp::MilpModel::sense)
        .def("add_var", &milp::MilpModel::add_var, py::arg("name"), py::arg("lb"), py::arg("ub"),
             py::arg("integral") = false)
        .def("add_row", &milp::MilpModel::add_row, py::arg("name"), py::arg("coeffs"),
             py::arg("rel"), py::arg("rhs"))
        .def("set_objective",
             [](milp::MilpModel& mm, const std::vector<std::pair<int, double>>& coeffs,
                double constant) {
                 mm.objective = coeffs;
                 mm.obj_constant = constant;
             },
             py::arg("coeffs"), py::arg("constant") = 0.0)
        .def("n_vars", &milp::MilpModel::n_vars)
        .def("n_rows", &milp::MilpModel::n_rows)
        .def("n_integer", &milp::MilpModel::n_integer);

    m.def("solve_lp", [](const milp::MilpModel& model) {
        const auto r = milp::solve_lp(model);
        py::dict d;
        d["status"] = milp::to_string(r.status);
        d["objective"] = r.objective;
        d["x"] = r.x;
        d["iterations"] = r.iterations;
        return d;
    });
    m.def("branch_and_bound",
          [](const milp::MilpModel& model) {
              return solution_dict(milp::branch_and_bound(model), model);
          });
    m.def("export_mps", &milp::export_mps, py::arg("model"));
    m.def("import_mps", &milp::import_mps, py::arg("text"));
    m.def("external_solve",
          [](const milp::MilpModel& model, const std::string& cmd) {
              return solution_dict(milp::external_solve(model, cmd), model);
          },
          py::arg("model"), py::arg("command_template"));

    py::enum_<DrpMode>(m, "DrpMode").value("Off", DrpMode::Off).value("On", DrpMode::On);

    py::class_<RiskSpec>(m, "RiskSpec")
        .def_static("wcdrc", &RiskSpec::wcdrc)
        .def_static("cdrc", &RiskSpec::cdrc, py::arg("lambda_p"), py::arg("target"),
                    py::arg("edr_baseline"));

    py::class_<BuiltModel>(m, "BuiltModel")
        .def_property_readonly("model",
                               [](const BuiltModel& b) -> const milp::MilpModel& { return b.model; },
                               py::return_value_policy::reference_internal)
        .def("n_vars", [](const BuiltModel& b) { return b.model.n_vars(); })
        .def("n_rows", [](const BuiltModel& b) { return b.model.n_rows(); })
        .def("n_integer", [](const BuiltModel& b) { return b.model.n_integer(); });

    m.def("build_milp", &build_milp, py::arg("config"), py::arg("scenarios"), py::arg("mode"),
          py::arg("risk"));

    m.def("run_study",
          [](const MgConfig& cfg, const std::string& out_dir) {
              SolveContext ctx = SolveContext::from_config(cfg);
              StudyReport rep = run_study(cfg, ctx);
              if (!out_dir.empty()) write_study_report(rep, out_dir);
              py::dict d;
              d["target_wcdrc"] = rep.step3.target;
              d["edr_baseline_wcdrc"] = rep.step3.edr_baseline;
              d["target_drp"] = rep.step5.target;
              d["edr_baseline_drp"] = rep.step5.edr_baseline;
              d["wall_sec"] = rep.meta.wall_sec;
              d["summary"] = study_summary_text(rep);
              return d;
          },
          py::arg("config"), py::arg("out_dir") = std::string());

    m.attr("__version__") = "0.1.0";
}

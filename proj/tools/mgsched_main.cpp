#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "mgsched/audit.hpp"
#include "mgsched/csv.hpp"
#include "mgsched/milp/mps.hpp"
#include "mgsched/pipeline.hpp"

namespace fs = std::filesystem;
using namespace mgsched;

namespace {

// Exit codes: 0 ok, 2 config error, 3 infeasible, 4 solver failure, 5 audit failure.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitSolver = 4;
constexpr int kExitAudit = 5;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<int> horizon;
    std::optional<int> scenarios;
    std::string solver = "auto";
    std::string drp = "off";
    std::string risk = "wcdrc";
    double lambda = 0.9;
    std::vector<double> lambda_grid;
    std::vector<double> participation_grid;
};

MgConfig resolve_config(const CommonArgs& a) {
    MgConfig cfg = a.config_path.empty() ? default_config() : load_config(a.config_path);
    if (a.seed) cfg.seed = *a.seed;
    if (a.horizon) cfg = cfg.truncated(*a.horizon);
    if (a.scenarios) cfg.n_scenarios = *a.scenarios;
    if (!a.lambda_grid.empty()) cfg.risk.lambda_grid = a.lambda_grid;
    if (!a.participation_grid.empty()) cfg.risk.participation_grid = a.participation_grid;
    if (a.solver == "internal") cfg.solver.choice = SolverChoice::Internal;
    else if (a.solver == "external") cfg.solver.choice = SolverChoice::External;
    else if (a.solver == "auto") cfg.solver.choice = SolverChoice::Auto;
    else throw ConfigError("unknown solver choice: " + a.solver);
    cfg.validate();
    return cfg;
}

DrpMode drp_mode(const CommonArgs& a) {
    if (a.drp == "on") return DrpMode::On;
    if (a.drp == "off") return DrpMode::Off;
    throw ConfigError("--drp must be on or off");
}

void write_schedule_csv(const DecisionSchedule& d, const fs::path& path) {
    csv::Table t;
    t.header = {"t", "s"};
    for (int g = 1; g <= d.G; ++g) {
        const std::string G = std::to_string(g);
        for (const char* base : {"p_dgr", "committed", "started", "stopped", "startup_cost",
                                 "shutdown_cost"})
            t.header.push_back(std::string(base) + G);
    }
    for (const char* base : {"p_buy", "p_sell", "grid_flag", "p_ch", "p_disch", "bess_flag", "soc"})
        t.header.push_back(base);
    for (int i = 1; i <= d.NPV; ++i) t.header.push_back("p_pv_" + std::to_string(i));
    for (int j = 1; j <= d.NWT; ++j) t.header.push_back("p_wt_" + std::to_string(j));
    if (d.mode == DrpMode::On) {
        t.header.push_back("pl_shift");
        t.header.push_back("pl_shift_abs");
    }
    for (int t_ = 0; t_ < d.T; ++t_)
        for (int s = 0; s < d.S; ++s) {
            std::vector<std::string> row{std::to_string(t_ + 1), std::to_string(s + 1)};
            for (int g = 0; g < d.G; ++g) {
                const int k = d.gts(g, t_, s);
                for (double v : {d.p_dgr[k], d.committed[k], d.started[k], d.stopped[k],
                                 d.startup_cost[k], d.shutdown_cost[k]})
                    row.push_back(csv::format_number(v));
            }
            const int k = d.ts(t_, s);
            for (double v : {d.p_buy[k], d.p_sell[k], d.grid_flag[k], d.p_ch[k], d.p_disch[k],
                             d.bess_flag[k], d.soc[k]})
                row.push_back(csv::format_number(v));
            for (int i = 0; i < d.NPV; ++i) row.push_back(csv::format_number(d.p_pv[d.uts(i, t_, s)]));
            for (int j = 0; j < d.NWT; ++j) row.push_back(csv::format_number(d.p_wt[d.uts(j, t_, s)]));
            if (d.mode == DrpMode::On) {
                row.push_back(csv::format_number(d.pl_shift[k]));
                row.push_back(csv::format_number(d.pl_shift_abs[k]));
            }
            t.rows.push_back(std::move(row));
        }
    csv::write_table(path, t);
}

void write_audit_csv(const AuditReport& rep, const fs::path& path) {
    csv::Table t;
    t.header = {"family", "indices", "residual"};
    for (const auto& v : rep.violations)
        t.rows.push_back({v.family, v.indices, csv::format_number(v.residual)});
    csv::write_table(path, t);
}

int cmd_generate(const CommonArgs& a) {
    MgConfig cfg = resolve_config(a);
    ScenarioSet scen = cfg.make_scenarios();
    write_scenario_bundle(scen, a.out_dir);
    std::cout << "wrote " << scen.size() << " scenarios x " << scen.horizon() << " hours to "
              << a.out_dir << "\n";
    return kExitOk;
}

int cmd_solve(const CommonArgs& a) {
    MgConfig cfg = resolve_config(a);
    ScenarioSet scen = cfg.make_scenarios();
    SolveContext ctx = SolveContext::from_config(cfg);
    const DrpMode mode = drp_mode(a);

    DecisionSchedule schedule;
    std::vector<double> profits(scen.size());
    RiskSpec spec = RiskSpec::wcdrc();
    if (a.risk == "cdrc") {
        StepResult base = mode == DrpMode::On ? run_step5_drp_wcdrc(cfg, scen, ctx)
                                              : run_step3_wcdrc(cfg, scen, ctx);
        spec = RiskSpec::cdrc(a.lambda, base.target, base.edr_baseline);
        BuiltModel built = build_milp(cfg, scen, mode, spec);
        for (const auto& w : built.warnings) std::cerr << "warning: " << w << "\n";
        milp::Solution sol = solve_model(built.model, ctx);
        if (sol.status == milp::SolStatus::Infeasible) {
            std::cerr << "model infeasible at lambda " << a.lambda << "\n";
            return kExitInfeasible;
        }
        if (sol.status != milp::SolStatus::Optimal) {
            std::cerr << "solver ended with status " << milp::to_string(sol.status) << "\n";
            return kExitSolver;
        }
        schedule = extract_schedule(built, sol.x);
    } else if (a.risk == "wcdrc") {
        StepResult step = mode == DrpMode::On ? run_step5_drp_wcdrc(cfg, scen, ctx)
                                              : run_step3_wcdrc(cfg, scen, ctx);
        schedule = step.schedule;
    } else {
        throw ConfigError("--risk must be wcdrc or cdrc");
    }

    for (int s = 0; s < scen.size(); ++s)
        profits[s] = compute_profit(schedule, scen.scenarios[s], cfg, mode, s);

    fs::create_directories(a.out_dir);
    write_schedule_csv(schedule, fs::path(a.out_dir) / "schedule.csv");
    AuditReport audit = audit_solution(schedule, scen, cfg);
    write_audit_csv(audit, fs::path(a.out_dir) / "audit.csv");
    {
        csv::Table t;
        t.header = {"scenario", "profit"};
        double avg = 0.0;
        for (int s = 0; s < scen.size(); ++s) {
            t.rows.push_back({std::to_string(s + 1), csv::format_number(profits[s])});
            avg += scen.scenarios[s].prob * profits[s];
        }
        t.rows.push_back({"average", csv::format_number(avg)});
        csv::write_table(fs::path(a.out_dir) / "profit.csv", t);
        std::cout << "average profit " << avg << " $\n";
    }
    if (!audit.clean()) {
        std::cerr << audit.summary() << "\n";
        return kExitAudit;
    }
    std::cout << "audit clean\n";
    return kExitOk;
}

int cmd_study(const CommonArgs& a) {
    MgConfig cfg = resolve_config(a);
    SolveContext ctx = SolveContext::from_config(cfg);
    StudyReport rep = run_study(cfg, ctx);
    write_study_report(rep, a.out_dir);
    std::cout << study_summary_text(rep);
    std::cout << "tables written to " << a.out_dir << "\n";
    for (const auto& row : rep.step4.rows)
        if (row.status == milp::SolStatus::Infeasible) return kExitInfeasible;
    for (const auto& row : rep.step6.rows)
        if (row.status == milp::SolStatus::Infeasible) return kExitInfeasible;
    return kExitOk;
}

int cmd_export_mps(const CommonArgs& a, const std::string& out_file) {
    MgConfig cfg = resolve_config(a);
    ScenarioSet scen = cfg.make_scenarios();
    const DrpMode mode = drp_mode(a);
    RiskSpec spec = RiskSpec::wcdrc();
    if (a.risk == "cdrc") {
        SolveContext ctx = SolveContext::from_config(cfg);
        StepResult base = mode == DrpMode::On ? run_step5_drp_wcdrc(cfg, scen, ctx)
                                              : run_step3_wcdrc(cfg, scen, ctx);
        spec = RiskSpec::cdrc(a.lambda, base.target, base.edr_baseline);
    } else if (a.risk != "wcdrc") {
        throw ConfigError("--risk must be wcdrc or cdrc");
    }
    BuiltModel built = build_milp(cfg, scen, mode, spec);
    for (const auto& w : built.warnings) std::cerr << "warning: " << w << "\n";
    csv::write_file_atomic(out_file, milp::export_mps(built.model));
    std::cout << "wrote " << out_file << " (" << built.model.n_vars() << " vars, "
              << built.model.n_rows() << " rows, " << built.model.n_integer() << " integer)\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Risk-constrained microgrid day-ahead scheduling"};
    app.require_subcommand(1);

    CommonArgs a;
    auto add_common = [&](CLI::App* sub, bool with_modes) {
        sub->add_option("--config", a.config_path, "config JSON (built-in defaults when omitted)");
        sub->add_option("--seed", a.seed, "override the config seed");
        sub->add_option("--out", a.out_dir, "output directory");
        sub->add_option("--horizon", a.horizon, "truncate the day to the first N hours")
            ->check(CLI::Range(1, 24));
        sub->add_option("--scenarios", a.scenarios, "override the scenario count")
            ->check(CLI::PositiveNumber);
        sub->add_option("--solver", a.solver, "internal | external | auto")
            ->check(CLI::IsMember({"internal", "external", "auto"}));
        if (with_modes) {
            sub->add_option("--drp", a.drp, "on | off")->check(CLI::IsMember({"on", "off"}));
            sub->add_option("--risk", a.risk, "wcdrc | cdrc")
                ->check(CLI::IsMember({"wcdrc", "cdrc"}));
            sub->add_option("--lambda", a.lambda, "risk budget fraction for --risk cdrc")
                ->check(CLI::Range(1e-9, 1.0));
        }
    };

    auto* gen = app.add_subcommand("generate", "sample the scenario CSV bundle");
    add_common(gen, false);

    auto* solve = app.add_subcommand("solve", "solve one instance and audit the schedule");
    add_common(solve, true);

    auto* study = app.add_subcommand("study", "run the whole 7-step pipeline");
    add_common(study, false);
    study->add_option("--lambda-grid", a.lambda_grid, "lambda sweep values")->delimiter(',');
    study->add_option("--participation", a.participation_grid, "participation sweep values")
        ->delimiter(',');

    std::string mps_out = "model.mps";
    auto* exp = app.add_subcommand("export-mps", "write the model cmd_solve would solve");
    add_common(exp, true);
    exp->add_option("--mps-out", mps_out, "output MPS path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_generate(a);
        if (solve->parsed()) return cmd_solve(a);
        if (study->parsed()) return cmd_study(a);
        if (exp->parsed()) return cmd_export_mps(a, mps_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const BridgeError& e) {
        std::cerr << "solver bridge error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const SolveError& e) {
        const std::string what = e.what();
        if (what.find("infeasible") != std::string::npos) {
            std::cerr << "infeasible: " << what << "\n";
            return kExitInfeasible;
        }
        std::cerr << "solver error: " << what << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}

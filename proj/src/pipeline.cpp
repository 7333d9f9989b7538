#include "mgsched/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "json.hpp"

#include "mgsched/csv.hpp"

namespace mgsched {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

ScenarioSet single_scenario(const ScenarioSet& scen, int s) {
    ScenarioSet one;
    one.seed = scen.seed;
    one.scenarios.push_back(scen.scenarios[s]);
    one.scenarios[0].prob = 1.0;
    return one;
}

// Copies a single-scenario schedule into column s of the joint layout.
void stitch(DecisionSchedule& joint, const DecisionSchedule& part, int s) {
    for (int g = 0; g < joint.G; ++g)
        for (int t = 0; t < joint.T; ++t) {
            const int src = part.gts(g, t, 0), dst = joint.gts(g, t, s);
            joint.p_dgr[dst] = part.p_dgr[src];
            joint.committed[dst] = part.committed[src];
            joint.started[dst] = part.started[src];
            joint.stopped[dst] = part.stopped[src];
            joint.startup_cost[dst] = part.startup_cost[src];
            joint.shutdown_cost[dst] = part.shutdown_cost[src];
        }
    for (int t = 0; t < joint.T; ++t) {
        const int src = part.ts(t, 0), dst = joint.ts(t, s);
        joint.p_buy[dst] = part.p_buy[src];
        joint.p_sell[dst] = part.p_sell[src];
        joint.grid_flag[dst] = part.grid_flag[src];
        joint.p_ch[dst] = part.p_ch[src];
        joint.p_disch[dst] = part.p_disch[src];
        joint.bess_flag[dst] = part.bess_flag[src];
        joint.soc[dst] = part.soc[src];
        if (joint.mode == DrpMode::On) {
            joint.pl_shift[dst] = part.pl_shift[src];
            joint.pl_shift_abs[dst] = part.pl_shift_abs[src];
        }
    }
    for (int i = 0; i < joint.NPV; ++i)
        for (int t = 0; t < joint.T; ++t)
            joint.p_pv[joint.uts(i, t, s)] = part.p_pv[part.uts(i, t, 0)];
    for (int j = 0; j < joint.NWT; ++j)
        for (int t = 0; t < joint.T; ++t)
            joint.p_wt[joint.uts(j, t, s)] = part.p_wt[part.uts(j, t, 0)];
}

DecisionSchedule empty_schedule(const MgConfig& cfg, const ScenarioSet& scen, DrpMode mode) {
    DecisionSchedule d;
    d.T = cfg.horizon;
    d.S = scen.size();
    d.G = static_cast<int>(cfg.dgrs.size());
    d.NPV = cfg.n_pv_units();
    d.NWT = cfg.n_wt_units();
    d.mode = mode;
    d.coupling = cfg.coupling;
    const int gts = d.G * d.T * d.S, ts = d.T * d.S;
    d.p_dgr.assign(gts, 0.0);
    d.committed.assign(gts, 0.0);
    d.started.assign(gts, 0.0);
    d.stopped.assign(gts, 0.0);
    d.startup_cost.assign(gts, 0.0);
    d.shutdown_cost.assign(gts, 0.0);
    d.p_buy.assign(ts, 0.0);
    d.p_sell.assign(ts, 0.0);
    d.grid_flag.assign(ts, 0.0);
    d.p_ch.assign(ts, 0.0);
    d.p_disch.assign(ts, 0.0);
    d.bess_flag.assign(ts, 0.0);
    d.soc.assign(ts, 0.0);
    d.p_pv.assign(d.NPV * d.T * d.S, 0.0);
    d.p_wt.assign(d.NWT * d.T * d.S, 0.0);
    if (mode == DrpMode::On) {
        d.pl_shift.assign(ts, 0.0);
        d.pl_shift_abs.assign(ts, 0.0);
    }
    return d;
}

StepResult run_wcdrc(const MgConfig& cfg, const ScenarioSet& scen, DrpMode mode,
                     const SolveContext& ctx) {
    const auto t0 = Clock::now();
    StepResult res;
    res.mode = mode;
    const int S = scen.size();
    res.profits.resize(S);
    double solver_objective = std::nan("");

    if (cfg.coupling == Coupling::SharedTrade) {
        BuiltModel built = build_milp(cfg, scen, mode, RiskSpec::wcdrc());
        milp::Solution sol = solve_model(built.model, ctx);
        res.status = sol.status;
        res.nodes = sol.nodes;
        if (sol.status != milp::SolStatus::Optimal)
            throw SolveError("wcdrc solve ended with status " + milp::to_string(sol.status));
        res.schedule = extract_schedule(built, sol.x);
        solver_objective = sol.objective;
    } else {
        // Objective and constraints separate per scenario; solve them apart.
        res.schedule = empty_schedule(cfg, scen, mode);
        for (int s = 0; s < S; ++s) {
            ScenarioSet one = single_scenario(scen, s);
            BuiltModel built = build_milp(cfg, one, mode, RiskSpec::wcdrc());
            milp::Solution sol = solve_model(built.model, ctx);
            res.nodes += sol.nodes;
            if (sol.status != milp::SolStatus::Optimal)
                throw SolveError("wcdrc scenario " + std::to_string(s + 1)
                                 + " ended with status " + milp::to_string(sol.status));
            stitch(res.schedule, extract_schedule(built, sol.x), s);
        }
    }

    std::vector<double> probs(S);
    for (int s = 0; s < S; ++s) {
        probs[s] = scen.scenarios[s].prob;
        res.profits[s] = compute_profit(res.schedule, scen.scenarios[s], cfg, mode, s);
    }
    res.avg_profit = 0.0;
    for (int s = 0; s < S; ++s) res.avg_profit += probs[s] * res.profits[s];
    res.target = res.avg_profit;
    // The recomputed weighted profit must match what the solver maximized;
    // a mismatch means the extraction or the objective wiring is off.
    if (std::isfinite(solver_objective)
        && std::abs(solver_objective - res.avg_profit) > 1e-6 * (1.0 + std::abs(solver_objective)))
        throw SolveError("profit recomputation disagrees with the solver objective ("
                         + std::to_string(res.avg_profit) + " vs "
                         + std::to_string(solver_objective) + ")");
    res.risks.resize(S);
    for (int s = 0; s < S; ++s) res.risks[s] = downside_risk(res.profits[s], res.target);
    res.edr_baseline = expected_downside_risk(res.risks, probs);
    res.objective = res.avg_profit;
    res.wall_sec = seconds_since(t0);
    return res;
}

SweepResult run_cdrc(const MgConfig& cfg, const ScenarioSet& scen, DrpMode mode,
                     const StepResult& base, const SolveContext& ctx,
                     std::span<const double> lambda_grid) {
    SweepResult sweep;
    sweep.mode = mode;
    const int S = scen.size();
    for (double lambda : lambda_grid) {
        const auto t0 = Clock::now();
        LambdaResult row;
        row.lambda = lambda;
        row.edr_bound_value = edr_bound(lambda, base.edr_baseline);
        BuiltModel built =
            build_milp(cfg, scen, mode, RiskSpec::cdrc(lambda, base.target, base.edr_baseline));
        milp::Solution sol = solve_model(built.model, ctx);
        row.status = sol.status;
        row.wall_sec = seconds_since(t0);
        if (sol.status == milp::SolStatus::Optimal) {
            row.schedule = extract_schedule(built, sol.x);
            row.profits.resize(S);
            std::vector<double> probs(S);
            row.total_rip = 0.0;
            for (int s = 0; s < S; ++s) {
                probs[s] = scen.scenarios[s].prob;
                row.profits[s] = compute_profit(row.schedule, scen.scenarios[s], cfg, mode, s);
                const double rip = downside_risk(row.profits[s], base.target);
                row.total_rip += rip;
                row.avg_profit += probs[s] * row.profits[s];
                row.achieved_edr += probs[s] * rip;
            }
            row.avg_rip = row.achieved_edr;
            row.binding = row.edr_bound_value - row.achieved_edr <= 1e-6 * std::max(1.0, row.edr_bound_value);
            if (base.avg_profit != 0.0)
                row.profit_reduction_pct = 100.0 * (base.avg_profit - row.avg_profit) / base.avg_profit;
            if (base.edr_baseline > 0.0)
                row.rip_reduction_pct = 100.0 * (base.edr_baseline - row.avg_rip) / base.edr_baseline;
        }
        sweep.rows.push_back(std::move(row));
    }
    return sweep;
}

} // namespace

StepResult run_step3_wcdrc(const MgConfig& cfg, const ScenarioSet& scen, const SolveContext& ctx) {
    return run_wcdrc(cfg, scen, DrpMode::Off, ctx);
}

SweepResult run_step4_cdrc(const MgConfig& cfg, const ScenarioSet& scen, const StepResult& base,
                           const SolveContext& ctx, std::span<const double> lambda_grid) {
    return run_cdrc(cfg, scen, DrpMode::Off, base, ctx, lambda_grid);
}

StepResult run_step5_drp_wcdrc(const MgConfig& cfg, const ScenarioSet& scen, const SolveContext& ctx) {
    return run_wcdrc(cfg, scen, DrpMode::On, ctx);
}

SweepResult run_step6_drp_cdrc(const MgConfig& cfg, const ScenarioSet& scen, const StepResult& base,
                               const SolveContext& ctx, std::span<const double> lambda_grid) {
    return run_cdrc(cfg, scen, DrpMode::On, base, ctx, lambda_grid);
}

std::vector<SensitivitySlice> run_step7_sensitivity(const MgConfig& cfg, const ScenarioSet& scen,
                                                    const SolveContext& ctx) {
    std::vector<SensitivitySlice> out;
    for (double part : cfg.risk.participation_grid) {
        SensitivitySlice slice;
        slice.participation = part;
        const MgConfig varied = cfg.with_participation(part);
        slice.wcdrc = run_step5_drp_wcdrc(varied, scen, ctx);
        slice.cdrc = run_step6_drp_cdrc(varied, scen, slice.wcdrc, ctx, cfg.risk.lambda_grid);
        out.push_back(std::move(slice));
    }
    return out;
}

StudyReport run_study(const MgConfig& cfg, const SolveContext& ctx) {
    const auto t0 = Clock::now();
    ScenarioSet scen = cfg.make_scenarios();
    StudyReport rep;
    rep.step3 = run_step3_wcdrc(cfg, scen, ctx);
    rep.step4 = run_step4_cdrc(cfg, scen, rep.step3, ctx, cfg.risk.lambda_grid);
    rep.step5 = run_step5_drp_wcdrc(cfg, scen, ctx);
    rep.step6 = run_step6_drp_cdrc(cfg, scen, rep.step5, ctx, cfg.risk.lambda_grid);
    rep.step7 = run_step7_sensitivity(cfg, scen, ctx);
    rep.meta.seed = cfg.seed;
    rep.meta.solver = ctx.resolved_external_cmd().empty() ? "internal" : "external";
    rep.meta.rel_gap = ctx.opts.rel_gap;
    rep.meta.int_tol = ctx.opts.int_tol;
    rep.meta.wall_sec = seconds_since(t0);
    return rep;
}

namespace {

csv::Table step_table(const StepResult& r) {
    csv::Table t;
    t.header = {"scenario", "profit", "rip"};
    for (size_t s = 0; s < r.profits.size(); ++s)
        t.rows.push_back({std::to_string(s + 1), csv::format_number(r.profits[s]),
                          csv::format_number(r.risks[s])});
    t.rows.push_back({"average", csv::format_number(r.avg_profit), csv::format_number(r.edr_baseline)});
    return t;
}

csv::Table sweep_profit_table(const SweepResult& sw) {
    csv::Table t;
    t.header = {"lambda"};
    const size_t S = sw.rows.empty() ? 0 : sw.rows.front().profits.size();
    for (size_t s = 1; s <= S; ++s) t.header.push_back("s" + std::to_string(s));
    for (const auto& row : sw.rows) {
        std::vector<std::string> cells{csv::format_number(row.lambda)};
        if (row.status == milp::SolStatus::Optimal)
            for (double p : row.profits) cells.push_back(csv::format_number(p));
        else
            for (size_t s = 0; s < S; ++s) cells.push_back(milp::to_string(row.status));
        t.rows.push_back(std::move(cells));
    }
    return t;
}

csv::Table sweep_summary_table(const SweepResult& sw) {
    csv::Table t;
    t.header = {"lambda", "avg_profit", "total_rip", "avg_rip", "profit_reduction_pct",
                "rip_reduction_pct"};
    for (const auto& row : sw.rows) {
        if (row.status == milp::SolStatus::Optimal) {
            t.rows.push_back({csv::format_number(row.lambda), csv::format_number(row.avg_profit),
                              csv::format_number(row.total_rip), csv::format_number(row.avg_rip),
                              csv::format_number(row.profit_reduction_pct),
                              csv::format_number(row.rip_reduction_pct)});
        } else {
            t.rows.push_back({csv::format_number(row.lambda), milp::to_string(row.status), "", "",
                              "", ""});
        }
    }
    return t;
}

} // namespace

void write_study_report(const StudyReport& rep, const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    csv::write_table(out_dir / "table2.csv", step_table(rep.step3));
    csv::write_table(out_dir / "table3.csv", sweep_profit_table(rep.step4));
    csv::write_table(out_dir / "table4.csv", sweep_summary_table(rep.step4));
    csv::write_table(out_dir / "table5.csv", step_table(rep.step5));
    csv::write_table(out_dir / "table6.csv", sweep_profit_table(rep.step6));
    csv::write_table(out_dir / "table7.csv", sweep_summary_table(rep.step6));

    // Sensitivity surfaces: rows = wcdrc + lambda grid, columns = participation.
    csv::Table profit_surface, rip_surface;
    profit_surface.header = {"lambda"};
    rip_surface.header = {"lambda"};
    for (const auto& slice : rep.step7) {
        profit_surface.header.push_back("participation_" + csv::format_number(slice.participation));
        rip_surface.header.push_back("participation_" + csv::format_number(slice.participation));
    }
    std::vector<std::string> prow{"wcdrc"}, rrow{"wcdrc"};
    for (const auto& slice : rep.step7) {
        prow.push_back(csv::format_number(slice.wcdrc.avg_profit));
        rrow.push_back(csv::format_number(slice.wcdrc.edr_baseline));
    }
    profit_surface.rows.push_back(prow);
    rip_surface.rows.push_back(rrow);
    if (!rep.step7.empty()) {
        const size_t n_lambda = rep.step7.front().cdrc.rows.size();
        for (size_t li = 0; li < n_lambda; ++li) {
            std::vector<std::string> pr{csv::format_number(rep.step7.front().cdrc.rows[li].lambda)};
            std::vector<std::string> rr = pr;
            for (const auto& slice : rep.step7) {
                const auto& row = slice.cdrc.rows[li];
                if (row.status == milp::SolStatus::Optimal) {
                    pr.push_back(csv::format_number(row.avg_profit));
                    rr.push_back(csv::format_number(row.avg_rip));
                } else {
                    pr.push_back(milp::to_string(row.status));
                    rr.push_back(milp::to_string(row.status));
                }
            }
            profit_surface.rows.push_back(std::move(pr));
            rip_surface.rows.push_back(std::move(rr));
        }
    }
    csv::write_table(out_dir / "sensitivity_profit.csv", profit_surface);
    csv::write_table(out_dir / "sensitivity_rip.csv", rip_surface);

    nlohmann::json j;
    j["seed"] = rep.meta.seed;
    j["solver"] = rep.meta.solver;
    j["rel_gap"] = rep.meta.rel_gap;
    j["int_tol"] = rep.meta.int_tol;
    j["wall_sec"] = rep.meta.wall_sec;
    j["target_wcdrc"] = rep.step3.target;
    j["edr_baseline_wcdrc"] = rep.step3.edr_baseline;
    j["target_drp"] = rep.step5.target;
    j["edr_baseline_drp"] = rep.step5.edr_baseline;
    j["drp_profit_delta_pct"] = rep.step3.avg_profit != 0.0
        ? 100.0 * (rep.step5.avg_profit - rep.step3.avg_profit) / rep.step3.avg_profit
        : 0.0;
    j["drp_rip_delta_pct"] = rep.step3.edr_baseline > 0.0
        ? 100.0 * (rep.step5.edr_baseline - rep.step3.edr_baseline) / rep.step3.edr_baseline
        : 0.0;
    nlohmann::json parts = nlohmann::json::array();
    for (const auto& slice : rep.step7)
        parts.push_back(nlohmann::json{{"participation", slice.participation},
                                       {"target", slice.wcdrc.target},
                                       {"edr_baseline", slice.wcdrc.edr_baseline}});
    j["participation_targets"] = parts;
    csv::write_file_atomic(out_dir / "summary.json", j.dump(2) + "\n");
}

std::string study_summary_text(const StudyReport& rep) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(4);
    os << "WCDRC (no DRP): target " << rep.step3.target << " $, baseline EDR "
       << rep.step3.edr_baseline << " $\n";
    os << "WCDRC (DRP):    target " << rep.step5.target << " $, baseline EDR "
       << rep.step5.edr_baseline << " $\n";
    if (rep.step3.avg_profit != 0.0)
        os << "DRP effect: profit "
           << 100.0 * (rep.step5.avg_profit - rep.step3.avg_profit) / rep.step3.avg_profit
           << " %, RIP "
           << (rep.step3.edr_baseline > 0.0
                   ? 100.0 * (rep.step5.edr_baseline - rep.step3.edr_baseline) / rep.step3.edr_baseline
                   : 0.0)
           << " %\n";
    auto sweep_lines = [&os](const SweepResult& sw, const char* label) {
        os << label << "\n";
        for (const auto& row : sw.rows) {
            os << "  lambda " << row.lambda << ": ";
            if (row.status == milp::SolStatus::Optimal)
                os << "avg profit " << row.avg_profit << " $, avg RIP " << row.avg_rip
                   << " $ (profit -" << row.profit_reduction_pct << " %, RIP -"
                   << row.rip_reduction_pct << " %)";
            else
                os << milp::to_string(row.status);
            os << "\n";
        }
    };
    sweep_lines(rep.step4, "CDRC sweep (no DRP):");
    sweep_lines(rep.step6, "CDRC sweep (DRP):");
    for (const auto& slice : rep.step7)
        os << "participation " << slice.participation << ": target " << slice.wcdrc.target
           << " $, baseline EDR " << slice.wcdrc.edr_baseline << " $\n";
    os << "wall time " << rep.meta.wall_sec << " s, solver " << rep.meta.solver << "\n";
    return os.str();
}

} // namespace mgsched

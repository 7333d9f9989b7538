#include "mgsched/audit.hpp"

#include <cmath>
#include <sstream>

namespace mgsched {

namespace {

struct Ctx {
    AuditReport& rep;
    double tol;

    void check(bool ok, const std::string& family, const std::string& indices, double residual) {
        if (!ok) rep.violations.push_back(Violation{family, indices, residual});
    }
    void check_le(double lhs, double rhs, const std::string& family, const std::string& indices) {
        check(lhs <= rhs + tol, family, indices, lhs - rhs);
    }
    void check_eq(double lhs, double rhs, const std::string& family, const std::string& indices) {
        check(std::abs(lhs - rhs) <= tol, family, indices, lhs - rhs);
    }
    void check_binary(double v, const std::string& family, const std::string& indices) {
        check(std::abs(v - std::round(v)) <= tol && v > -tol && v < 1.0 + tol, family, indices,
              std::abs(v - std::round(v)));
    }
};

std::string gts_str(int g, int t, int s) {
    std::ostringstream os;
    os << "g=" << g + 1 << " t=" << t + 1 << " s=" << s + 1;
    return os.str();
}

std::string ts_str(int t, int s) {
    std::ostringstream os;
    os << "t=" << t + 1 << " s=" << s + 1;
    return os.str();
}

} // namespace

std::string AuditReport::summary() const {
    if (violations.empty()) return "audit clean";
    std::ostringstream os;
    os << violations.size() << " violation(s):";
    for (const auto& v : violations)
        os << "\n  " << v.family << " [" << v.indices << "] residual=" << v.residual;
    return os.str();
}

AuditReport audit_solution(const DecisionSchedule& sol, const ScenarioSet& scen,
                           const MgConfig& cfg, double tol) {
    AuditReport rep;
    Ctx c{rep, tol};
    const int T = sol.T, S = sol.S, G = sol.G;
    if (scen.size() != S || scen.horizon() != T)
        throw AuditError("audit_solution: scenario set does not match the schedule");

    for (int s = 0; s < S; ++s) {
        const Scenario& sc = scen.scenarios[s];
        double shift_sum = 0.0;
        for (int t = 0; t < T; ++t) {
            const int k = sol.ts(t, s);

            // Trade block.
            c.check_le(sol.p_buy[k] + sol.p_sell[k], cfg.grid.mctl, "eq5_cap", ts_str(t, s));
            c.check_binary(sol.grid_flag[k], "eq18_19_grid_flag", ts_str(t, s));
            c.check_le(sol.p_buy[k], cfg.grid.mctl * sol.grid_flag[k], "eq18_buy", ts_str(t, s));
            c.check_le(sol.p_sell[k], cfg.grid.mctl * (1.0 - sol.grid_flag[k]), "eq19_sell",
                       ts_str(t, s));
            c.check_le(sol.p_buy[k] * sol.p_sell[k], 0.0, "eq18_19_exclusive", ts_str(t, s));

            // Generators.
            for (int g = 0; g < G; ++g) {
                const auto& d = cfg.dgrs[g];
                const int gk = sol.gts(g, t, s);
                const double vp = sol.committed[gk];
                const double vp_prev = t > 0 ? sol.committed[sol.gts(g, t - 1, s)] : 0.0;
                const double pg = sol.p_dgr[gk];
                const double pg_prev = t > 0 ? sol.p_dgr[sol.gts(g, t - 1, s)] : 0.0;
                c.check_binary(vp, "eq6_commit_flag", gts_str(g, t, s));
                c.check_binary(sol.started[gk], "eq6_started_flag", gts_str(g, t, s));
                c.check_binary(sol.stopped[gk], "eq6_stopped_flag", gts_str(g, t, s));
                c.check_eq(sol.started[gk] - sol.stopped[gk], vp - vp_prev, "eq6_link",
                           gts_str(g, t, s));
                c.check_le(d.startup_cost * (vp - vp_prev), sol.startup_cost[gk], "eq7_suc",
                           gts_str(g, t, s));
                c.check_le(-sol.startup_cost[gk], 0.0, "eq7_suc_nonneg", gts_str(g, t, s));
                c.check_le(d.shutdown_cost * (vp_prev - vp), sol.shutdown_cost[gk], "eq8_sdc",
                           gts_str(g, t, s));
                c.check_le(-sol.shutdown_cost[gk], 0.0, "eq8_sdc_nonneg", gts_str(g, t, s));
                c.check_le(pg - pg_prev, d.up_rate, "eq9_up_rate", gts_str(g, t, s));
                c.check_le(pg_prev - pg, d.down_rate, "eq10_down_rate", gts_str(g, t, s));
                c.check_le(pg, d.p_max * vp, "eq11_cap", gts_str(g, t, s));
                c.check_le(d.p_min * vp, pg, "eq12_floor", gts_str(g, t, s));
            }

            // Battery.
            const double soc = sol.soc[k];
            const double soc_prev = t > 0 ? sol.soc[sol.ts(t - 1, s)] : cfg.bess.soc_init;
            c.check(soc >= cfg.bess.soc_min - tol && soc <= cfg.bess.soc_max + tol, "eq13_soc_window",
                    ts_str(t, s),
                    std::max(cfg.bess.soc_min - soc, soc - cfg.bess.soc_max));
            c.check_binary(sol.bess_flag[k], "eq14_15_bess_flag", ts_str(t, s));
            c.check_le(sol.p_ch[k], cfg.bess.p_ch_max * sol.bess_flag[k], "eq14_charge", ts_str(t, s));
            c.check_le(sol.p_disch[k], cfg.bess.p_disch_max * (1.0 - sol.bess_flag[k]), "eq15_discharge",
                       ts_str(t, s));
            c.check_le(sol.p_ch[k] * sol.p_disch[k], 0.0, "eq14_15_exclusive", ts_str(t, s));
            c.check_eq(soc - soc_prev,
                       cfg.bess.eta_ch * sol.p_ch[k] / cfg.bess.s_base
                           - sol.p_disch[k] / (cfg.bess.eta_disch * cfg.bess.s_base),
                       "eq16_soc_recursion", ts_str(t, s));

            // RES caps.
            for (int i = 0; i < sol.NPV; ++i) {
                c.check_le(sol.p_pv[sol.uts(i, t, s)], sc.pv_max[i][t], "eq27_pv_cap",
                           "i=" + std::to_string(i + 1) + " " + ts_str(t, s));
                c.check_le(-sol.p_pv[sol.uts(i, t, s)], 0.0, "eq27_pv_nonneg",
                           "i=" + std::to_string(i + 1) + " " + ts_str(t, s));
            }
            for (int j = 0; j < sol.NWT; ++j) {
                c.check_le(sol.p_wt[sol.uts(j, t, s)], sc.wt_max[j][t], "eq28_wt_cap",
                           "j=" + std::to_string(j + 1) + " " + ts_str(t, s));
                c.check_le(-sol.p_wt[sol.uts(j, t, s)], 0.0, "eq28_wt_nonneg",
                           "j=" + std::to_string(j + 1) + " " + ts_str(t, s));
            }

            // Power balance with or without the DRP shift.
            double gen = sol.p_buy[k] - sol.p_sell[k] - sol.p_ch[k] + sol.p_disch[k];
            for (int g = 0; g < G; ++g) gen += sol.p_dgr[sol.gts(g, t, s)];
            for (int i = 0; i < sol.NPV; ++i) gen += sol.p_pv[sol.uts(i, t, s)];
            for (int j = 0; j < sol.NWT; ++j) gen += sol.p_wt[sol.uts(j, t, s)];
            if (sol.mode == DrpMode::On) {
                const double shift = sol.pl_shift[k];
                shift_sum += shift;
                c.check_eq(gen, sc.load[t] + shift, "eq37_balance", ts_str(t, s));
                const double bound = cfg.drp.participation * sc.load[t];
                c.check(shift >= -bound - tol && shift <= bound + tol, "eq33_shift_bounds",
                        ts_str(t, s), std::max(-bound - shift, shift - bound));
                c.check_le(-sol.pl_shift_abs[k], 0.0, "eq36_abs_nonneg", ts_str(t, s));
                c.check_le(std::abs(shift), sol.pl_shift_abs[k] + tol, "eq36_abs_covers",
                           ts_str(t, s));
                // With a positive incentive the split variables are
                // cost-pressured onto |shift| exactly.
                if (cfg.drp.incentive[t] > 0.0)
                    c.check_eq(sol.pl_shift_abs[k], std::abs(shift), "eq36_complementarity",
                               ts_str(t, s));
            } else {
                c.check_eq(gen, sc.load[t], "eq26_balance", ts_str(t, s));
            }
        }

        // SOC must end the day no lower than it started.
        c.check_le(cfg.bess.soc_init, sol.soc[sol.ts(T - 1, s)], "eq17_soc_end",
                   "s=" + std::to_string(s + 1));
        if (sol.mode == DrpMode::On)
            c.check_eq(shift_sum, 0.0, "eq35_zero_sum", "s=" + std::to_string(s + 1));
    }

    // Risk block: identity, gating and the EDR budget.
    if (sol.risk.kind == RiskSpec::Kind::Cdrc) {
        double edr = 0.0;
        for (int s = 0; s < S; ++s) {
            const double profit = compute_profit(sol, scen.scenarios[s], cfg, sol.mode, s);
            const double shortfall = std::max(0.0, sol.risk.target - profit);
            c.check_binary(sol.below_target_flag[s], "eq30_below_flag", "s=" + std::to_string(s + 1));
            c.check_eq(sol.risk_value[s], shortfall, "eq30_risk_identity",
                       "s=" + std::to_string(s + 1));
            edr += scen.scenarios[s].prob * sol.risk_value[s];
        }
        c.check_le(edr, sol.risk.lambda * sol.risk.edr_baseline, "eq31_edr_budget", "");
    }

    return rep;
}

} // namespace mgsched

#include "mgsched/mg_model.hpp"

#include <algorithm>
#include <cmath>

namespace mgsched {

using milp::MilpModel;
using milp::Rel;
using milp::Sense;

namespace {

std::string idx(int t, int s) { return "_t" + std::to_string(t + 1) + "_s" + std::to_string(s + 1); }

// Sparse objective contribution of scenario s (the per-scenario profit as a
// linear expression), reused for the objective and for the risk rows.
std::vector<std::pair<int, double>> profit_expr(const ModelLayout& L, const MgConfig& cfg,
                                                const Scenario& sc, DrpMode mode, int s) {
    std::vector<std::pair<int, double>> e;
    for (int t = 0; t < L.T; ++t) {
        e.emplace_back(L.p_sell[L.ts(t, s)], sc.price_sell[t]);
        e.emplace_back(L.p_buy[L.ts(t, s)], -sc.price_buy[t]);
        for (int g = 0; g < L.G; ++g) {
            e.emplace_back(L.p_dgr[L.gts(g, t, s)], -cfg.dgrs[g].b_g);
            if (cfg.dgrs[g].c_g != 0.0)
                e.emplace_back(L.committed[L.gts(g, t, s)], -cfg.dgrs[g].c_g);
            if (cfg.dgrs[g].shutdown_cost != 0.0)
                e.emplace_back(L.stopped[L.gts(g, t, s)], -cfg.dgrs[g].shutdown_cost);
            if (cfg.dgrs[g].startup_cost != 0.0)
                e.emplace_back(L.started[L.gts(g, t, s)], -cfg.dgrs[g].startup_cost);
        }
        if (mode == DrpMode::On && cfg.drp.incentive[t] != 0.0) {
            e.emplace_back(L.shift_up[L.ts(t, s)], -cfg.drp.incentive[t]);
            e.emplace_back(L.shift_dn[L.ts(t, s)], -cfg.drp.incentive[t]);
        }
    }
    return e;
}

} // namespace

BuiltModel build_milp(const MgConfig& cfg, const ScenarioSet& scen, DrpMode mode,
                      const RiskSpec& risk) {
    cfg.validate();
    scen.validate();
    if (scen.horizon() != cfg.horizon)
        throw ConfigError("scenario horizon does not match the config");
    if (scen.n_pv() != cfg.n_pv_units() || scen.n_wt() != cfg.n_wt_units())
        throw ConfigError("scenario unit counts do not match the config");
    if (risk.kind == RiskSpec::Kind::Cdrc) {
        if (!(risk.lambda > 0.0 && risk.lambda <= 1.0))
            throw ConfigError("cdrc: lambda must lie in (0,1]");
        if (!(risk.edr_baseline >= 0.0)) throw ConfigError("cdrc: baseline EDR must be >= 0");
    }

    BuiltModel built;
    MilpModel& m = built.model;
    ModelLayout& L = built.layout;
    const int T = cfg.horizon, S = scen.size(), G = static_cast<int>(cfg.dgrs.size());
    L.T = T;
    L.S = S;
    L.G = G;
    L.NPV = cfg.n_pv_units();
    L.NWT = cfg.n_wt_units();
    L.mode = mode;
    L.risk = risk;
    L.coupling = cfg.coupling;
    m.name = cfg.name + (mode == DrpMode::On ? "_drp" : "")
           + (risk.kind == RiskSpec::Kind::Cdrc ? "_cdrc" : "_wcdrc");
    m.sense = Sense::Max;

    const bool shared = cfg.coupling == Coupling::SharedTrade;
    const double mctl = cfg.grid.mctl;

    L.p_dgr.assign(G * T * S, -1);
    L.committed.assign(G * T * S, -1);
    L.started.assign(G * T * S, -1);
    L.stopped.assign(G * T * S, -1);
    L.suc.assign(G * T * S, -1);
    L.sdc.assign(G * T * S, -1);
    L.p_buy.assign(T * S, -1);
    L.p_sell.assign(T * S, -1);
    L.grid_flag.assign(T * S, -1);
    L.p_ch.assign(T * S, -1);
    L.p_disch.assign(T * S, -1);
    L.bess_flag.assign(T * S, -1);
    L.soc.assign(T * S, -1);
    L.p_pv.assign(L.NPV * T * S, -1);
    L.p_wt.assign(L.NWT * T * S, -1);
    if (mode == DrpMode::On) {
        L.pl_shift.assign(T * S, -1);
        L.shift_up.assign(T * S, -1);
        L.shift_dn.assign(T * S, -1);
    }

    // Day-ahead trade schedule: one set per hour when shared across scenarios.
    if (shared) {
        for (int t = 0; t < T; ++t) {
            const std::string tt = "_t" + std::to_string(t + 1);
            const int vb = m.add_var("Pbuy" + tt, 0.0, mctl);
            const int vs = m.add_var("Psell" + tt, 0.0, mctl);
            const int vx = m.add_var("Xgrid" + tt, 0.0, 1.0, true);
            for (int s = 0; s < S; ++s) {
                L.p_buy[L.ts(t, s)] = vb;
                L.p_sell[L.ts(t, s)] = vs;
                L.grid_flag[L.ts(t, s)] = vx;
            }
        }
    }

    for (int s = 0; s < S; ++s) {
        const Scenario& sc = scen.scenarios[s];
        for (int t = 0; t < T; ++t) {
            const std::string suffix = idx(t, s);
            for (int g = 0; g < G; ++g) {
                const auto& d = cfg.dgrs[g];
                const std::string gs = "_g" + std::to_string(g + 1) + suffix;
                L.p_dgr[L.gts(g, t, s)] = m.add_var("P" + gs, 0.0, d.p_max);
                L.committed[L.gts(g, t, s)] = m.add_var("vc" + gs, 0.0, 1.0, true);
                // Started/stopped stay continuous: the commitment linking plus
                // nonnegative costs pin them to 0/1 at any optimum.
                L.started[L.gts(g, t, s)] = m.add_var("y" + gs, 0.0, 1.0);
                L.stopped[L.gts(g, t, s)] = m.add_var("ss" + gs, 0.0, 1.0);
                L.suc[L.gts(g, t, s)] = m.add_var("suc" + gs, 0.0, d.startup_cost);
                L.sdc[L.gts(g, t, s)] = m.add_var("sdc" + gs, 0.0, d.shutdown_cost);
            }
            if (!shared) {
                L.p_buy[L.ts(t, s)] = m.add_var("Pbuy" + suffix, 0.0, mctl);
                L.p_sell[L.ts(t, s)] = m.add_var("Psell" + suffix, 0.0, mctl);
                L.grid_flag[L.ts(t, s)] = m.add_var("Xgrid" + suffix, 0.0, 1.0, true);
            }
            L.p_ch[L.ts(t, s)] = m.add_var("Pch" + suffix, 0.0, cfg.bess.p_ch_max);
            L.p_disch[L.ts(t, s)] = m.add_var("Pdis" + suffix, 0.0, cfg.bess.p_disch_max);
            L.bess_flag[L.ts(t, s)] = m.add_var("bbat" + suffix, 0.0, 1.0, true);
            L.soc[L.ts(t, s)] = m.add_var("soc" + suffix, cfg.bess.soc_min, cfg.bess.soc_max);
            for (int i = 0; i < L.NPV; ++i)
                L.p_pv[L.uts(i, t, s)] =
                    m.add_var("pv_" + std::to_string(i + 1) + suffix, 0.0, sc.pv_max[i][t]);
            for (int j = 0; j < L.NWT; ++j)
                L.p_wt[L.uts(j, t, s)] =
                    m.add_var("wt_" + std::to_string(j + 1) + suffix, 0.0, sc.wt_max[j][t]);
            if (mode == DrpMode::On) {
                const double bound = cfg.drp.participation * sc.load[t];
                L.pl_shift[L.ts(t, s)] = m.add_var("pld" + suffix, -bound, bound);
                L.shift_up[L.ts(t, s)] = m.add_var("shp" + suffix, 0.0, bound);
                L.shift_dn[L.ts(t, s)] = m.add_var("shm" + suffix, 0.0, bound);
            }
        }
    }
    if (risk.kind == RiskSpec::Kind::Cdrc) {
        L.risk_var.assign(S, -1);
        L.below_flag.assign(S, -1);
        for (int s = 0; s < S; ++s) {
            L.risk_var[s] = m.add_var("risk_s" + std::to_string(s + 1), 0.0, milp::kInf);
            L.below_flag[s] = m.add_var("W_s" + std::to_string(s + 1), 0.0, 1.0, true);
        }
    }

    // Trade cap and buy/sell exclusivity rows, once per hour when shared.
    const int trade_scen = shared ? 1 : S;
    for (int s = 0; s < trade_scen; ++s) {
        for (int t = 0; t < T; ++t) {
            const std::string suffix = shared ? "_t" + std::to_string(t + 1) : idx(t, s);
            m.add_row("eq5_cap" + suffix,
                      {{L.p_buy[L.ts(t, s)], 1.0}, {L.p_sell[L.ts(t, s)], 1.0}}, Rel::Le, mctl);
            m.add_row("eq18_buy" + suffix,
                      {{L.p_buy[L.ts(t, s)], 1.0}, {L.grid_flag[L.ts(t, s)], -mctl}}, Rel::Le, 0.0);
            m.add_row("eq19_sell" + suffix,
                      {{L.p_sell[L.ts(t, s)], 1.0}, {L.grid_flag[L.ts(t, s)], mctl}}, Rel::Le, mctl);
        }
    }

    for (int s = 0; s < S; ++s) {
        const Scenario& sc = scen.scenarios[s];
        for (int t = 0; t < T; ++t) {
            const std::string suffix = idx(t, s);
            for (int g = 0; g < G; ++g) {
                const auto& d = cfg.dgrs[g];
                const std::string gs = "_g" + std::to_string(g + 1) + suffix;
                const int vp = L.committed[L.gts(g, t, s)];
                const int vp_prev = t > 0 ? L.committed[L.gts(g, t - 1, s)] : -1;
                const int pg = L.p_dgr[L.gts(g, t, s)];
                const int pg_prev = t > 0 ? L.p_dgr[L.gts(g, t - 1, s)] : -1;

                // Commitment change bookkeeping; v' and P start from 0 at t=1.
                std::vector<std::pair<int, double>> link = {{L.started[L.gts(g, t, s)], 1.0},
                                                            {L.stopped[L.gts(g, t, s)], -1.0},
                                                            {vp, -1.0}};
                if (vp_prev >= 0) link.emplace_back(vp_prev, 1.0);
                m.add_row("eq6_link" + gs, std::move(link), Rel::Eq, 0.0);

                if (d.startup_cost > 0.0) {
                    std::vector<std::pair<int, double>> r = {{L.suc[L.gts(g, t, s)], 1.0},
                                                             {vp, -d.startup_cost}};
                    if (vp_prev >= 0) r.emplace_back(vp_prev, d.startup_cost);
                    m.add_row("eq7_suc" + gs, std::move(r), Rel::Ge, 0.0);
                }
                if (d.shutdown_cost > 0.0) {
                    std::vector<std::pair<int, double>> r = {{L.sdc[L.gts(g, t, s)], 1.0},
                                                             {vp, d.shutdown_cost}};
                    if (vp_prev >= 0) r.emplace_back(vp_prev, -d.shutdown_cost);
                    m.add_row("eq8_sdc" + gs, std::move(r), Rel::Ge, 0.0);
                }

                std::vector<std::pair<int, double>> up = {{pg, 1.0}};
                if (pg_prev >= 0) up.emplace_back(pg_prev, -1.0);
                m.add_row("eq9_up" + gs, std::move(up), Rel::Le, d.up_rate);
                std::vector<std::pair<int, double>> dn = {{pg, -1.0}};
                if (pg_prev >= 0) dn.emplace_back(pg_prev, 1.0);
                m.add_row("eq10_down" + gs, std::move(dn), Rel::Le, d.down_rate);

                m.add_row("eq11_cap" + gs, {{pg, 1.0}, {vp, -d.p_max}}, Rel::Le, 0.0);
                m.add_row("eq12_floor" + gs, {{pg, 1.0}, {vp, -d.p_min}}, Rel::Ge, 0.0);
            }

            m.add_row("eq14_ch" + suffix,
                      {{L.p_ch[L.ts(t, s)], 1.0}, {L.bess_flag[L.ts(t, s)], -cfg.bess.p_ch_max}},
                      Rel::Le, 0.0);
            m.add_row("eq15_dis" + suffix,
                      {{L.p_disch[L.ts(t, s)], 1.0}, {L.bess_flag[L.ts(t, s)], cfg.bess.p_disch_max}},
                      Rel::Le, cfg.bess.p_disch_max);

            // SOC recursion; the initial state enters the t=1 right-hand side.
            {
                std::vector<std::pair<int, double>> r = {
                    {L.soc[L.ts(t, s)], 1.0},
                    {L.p_ch[L.ts(t, s)], -cfg.bess.eta_ch / cfg.bess.s_base},
                    {L.p_disch[L.ts(t, s)], 1.0 / (cfg.bess.eta_disch * cfg.bess.s_base)}};
                double rhs = 0.0;
                if (t > 0) r.emplace_back(L.soc[L.ts(t - 1, s)], -1.0);
                else rhs = cfg.bess.soc_init;
                m.add_row("eq16_soc" + suffix, std::move(r), Rel::Eq, rhs);
            }

            // Power balance; the DRP shift moves load between hours.
            {
                std::vector<std::pair<int, double>> r;
                for (int g = 0; g < G; ++g) r.emplace_back(L.p_dgr[L.gts(g, t, s)], 1.0);
                r.emplace_back(L.p_buy[L.ts(t, s)], 1.0);
                r.emplace_back(L.p_sell[L.ts(t, s)], -1.0);
                for (int i = 0; i < L.NPV; ++i) r.emplace_back(L.p_pv[L.uts(i, t, s)], 1.0);
                for (int j = 0; j < L.NWT; ++j) r.emplace_back(L.p_wt[L.uts(j, t, s)], 1.0);
                r.emplace_back(L.p_ch[L.ts(t, s)], -1.0);
                r.emplace_back(L.p_disch[L.ts(t, s)], 1.0);
                const char* label = mode == DrpMode::On ? "eq37_balance" : "eq26_balance";
                if (mode == DrpMode::On) r.emplace_back(L.pl_shift[L.ts(t, s)], -1.0);
                m.add_row(label + suffix, std::move(r), Rel::Eq, sc.load[t]);
            }

            if (mode == DrpMode::On) {
                // Split-variable |shift| for the incentive cost.
                m.add_row("eq36_split" + suffix,
                          {{L.pl_shift[L.ts(t, s)], 1.0},
                           {L.shift_up[L.ts(t, s)], -1.0},
                           {L.shift_dn[L.ts(t, s)], 1.0}},
                          Rel::Eq, 0.0);
            }
        }

        // End-of-day SOC may not fall below the initial state (telescoped sum).
        m.add_row("eq17_socend_s" + std::to_string(s + 1), {{L.soc[L.ts(T - 1, s)], 1.0}}, Rel::Ge,
                  cfg.bess.soc_init);

        if (mode == DrpMode::On) {
            // Shifts cancel over the day: consumers move load, not shed it.
            std::vector<std::pair<int, double>> r;
            for (int t = 0; t < T; ++t) r.emplace_back(L.pl_shift[L.ts(t, s)], 1.0);
            m.add_row("eq35_zerosum_s" + std::to_string(s + 1), std::move(r), Rel::Eq, 0.0);
        }
    }

    // Objective: probability-weighted scenario profits.
    std::vector<double> obj_dense(m.n_vars(), 0.0);
    for (int s = 0; s < S; ++s) {
        const double prob = scen.scenarios[s].prob;
        for (const auto& [j, a] : profit_expr(L, cfg, scen.scenarios[s], mode, s))
            obj_dense[j] += prob * a;
    }
    for (int j = 0; j < m.n_vars(); ++j)
        if (obj_dense[j] != 0.0) m.objective.emplace_back(j, obj_dense[j]);

    if (risk.kind == RiskSpec::Kind::Cdrc) {
        std::vector<std::pair<int, double>> coupling_row;
        for (int s = 0; s < S; ++s) {
            const Scenario& sc = scen.scenarios[s];
            double max_sell = 0.0;
            for (double p : sc.price_sell) max_sell = std::max(max_sell, p);
            const double profit_ub = T * mctl * max_sell;
            const double big_m = 2.0 * (profit_ub + std::abs(risk.target));
            m.big_m_registry.emplace_back(
                "risk_M_s" + std::to_string(s + 1) + " = 2*(T*MCTL*max_sell + |target|)", big_m);

            auto expr = profit_expr(L, cfg, sc, mode, s);
            // risk + profit >= target   (risk covers the shortfall)
            std::vector<std::pair<int, double>> lo = expr;
            lo.emplace_back(L.risk_var[s], 1.0);
            m.add_row("eq30_lo_s" + std::to_string(s + 1), std::move(lo), Rel::Ge, risk.target);
            // risk + profit <= target + M(1-W)  (tightness when the scenario is short)
            std::vector<std::pair<int, double>> hi = expr;
            hi.emplace_back(L.risk_var[s], 1.0);
            hi.emplace_back(L.below_flag[s], big_m);
            m.add_row("eq30_hi_s" + std::to_string(s + 1), std::move(hi), Rel::Le,
                      risk.target + big_m);
            // risk <= M W  (risk vanishes when the scenario meets the target)
            m.add_row("eq30_gate_s" + std::to_string(s + 1),
                      {{L.risk_var[s], 1.0}, {L.below_flag[s], -big_m}}, Rel::Le, 0.0);

            coupling_row.emplace_back(L.risk_var[s], sc.prob);
        }
        m.add_row("eq31_edr", std::move(coupling_row), Rel::Le, risk.lambda * risk.edr_baseline);
    }

    // Flag hours no dispatch can serve; the solver will confirm, this names them.
    for (int s = 0; s < S; ++s) {
        const Scenario& sc = scen.scenarios[s];
        double dgr_total = 0.0;
        for (const auto& d : cfg.dgrs) dgr_total += d.p_max;
        for (int t = 0; t < T; ++t) {
            double supply = dgr_total + mctl + cfg.bess.p_disch_max;
            for (int i = 0; i < L.NPV; ++i) supply += sc.pv_max[i][t];
            for (int j = 0; j < L.NWT; ++j) supply += sc.wt_max[j][t];
            double demand = sc.load[t];
            if (mode == DrpMode::On) demand *= 1.0 - cfg.drp.participation;
            if (demand > supply)
                built.warnings.push_back(
                    std::string(mode == DrpMode::On ? "eq37_balance" : "eq26_balance")
                    + " unsatisfiable: load " + std::to_string(sc.load[t]) + " kW at t="
                    + std::to_string(t + 1) + " s=" + std::to_string(s + 1)
                    + " exceeds the maximum supply " + std::to_string(supply) + " kW");
        }
    }

    m.validate();
    return built;
}

DecisionSchedule extract_schedule(const BuiltModel& built, const std::vector<double>& x) {
    const ModelLayout& L = built.layout;
    if (static_cast<int>(x.size()) != built.model.n_vars())
        throw Error("extract_schedule: assignment size does not match the model");
    DecisionSchedule d;
    d.T = L.T;
    d.S = L.S;
    d.G = L.G;
    d.NPV = L.NPV;
    d.NWT = L.NWT;
    d.mode = L.mode;
    d.risk = L.risk;
    d.coupling = L.coupling;
    auto take = [&x](const std::vector<int>& ids) {
        std::vector<double> out(ids.size(), 0.0);
        for (size_t k = 0; k < ids.size(); ++k) out[k] = ids[k] >= 0 ? x[ids[k]] : 0.0;
        return out;
    };
    d.p_dgr = take(L.p_dgr);
    d.committed = take(L.committed);
    d.started = take(L.started);
    d.stopped = take(L.stopped);
    d.startup_cost = take(L.suc);
    d.shutdown_cost = take(L.sdc);
    d.p_buy = take(L.p_buy);
    d.p_sell = take(L.p_sell);
    d.grid_flag = take(L.grid_flag);
    d.p_ch = take(L.p_ch);
    d.p_disch = take(L.p_disch);
    d.bess_flag = take(L.bess_flag);
    d.soc = take(L.soc);
    d.p_pv = take(L.p_pv);
    d.p_wt = take(L.p_wt);
    if (L.mode == DrpMode::On) {
        d.pl_shift = take(L.pl_shift);
        d.pl_shift_abs.resize(d.pl_shift.size());
        for (size_t k = 0; k < d.pl_shift.size(); ++k)
            d.pl_shift_abs[k] = x[L.shift_up[k]] + x[L.shift_dn[k]];
    }
    if (L.risk.kind == RiskSpec::Kind::Cdrc) {
        d.risk_value = take(L.risk_var);
        d.below_target_flag = take(L.below_flag);
    }
    return d;
}

double compute_profit(const DecisionSchedule& sol, const Scenario& scen, const MgConfig& cfg,
                      DrpMode mode, int s) {
    if (sol.T != static_cast<int>(scen.load.size()))
        throw Error("compute_profit: horizon mismatch");
    double profit = 0.0;
    for (int t = 0; t < sol.T; ++t) {
        profit += sol.p_sell[sol.ts(t, s)] * scen.price_sell[t];
        profit -= sol.p_buy[sol.ts(t, s)] * scen.price_buy[t];
        for (int g = 0; g < sol.G; ++g) {
            profit -= cfg.dgrs[g].b_g * sol.p_dgr[sol.gts(g, t, s)];
            profit -= cfg.dgrs[g].c_g * sol.committed[sol.gts(g, t, s)];
            profit -= sol.shutdown_cost[sol.gts(g, t, s)];
            profit -= sol.startup_cost[sol.gts(g, t, s)];
        }
        if (mode == DrpMode::On)
            profit -= sol.pl_shift_abs[sol.ts(t, s)] * cfg.drp.incentive[t];
    }
    return profit;
}

double bus_injection(const DecisionSchedule& sol, const MgConfig& cfg, const Scenario& scen,
                     int w, int t, int s) {
    if (w < 1 || w > 6) throw Error("bus_injection: bus index must lie in 1..6");
    double v = 0.0;
    switch (w) {
    case 1:
    case 2:
        for (int i = 0; i < sol.NPV; ++i)
            if (cfg.pv_bus(i) == w) v += sol.p_pv[sol.uts(i, t, s)];
        return v;
    case 3:
        for (int j = 0; j < sol.NWT; ++j) v += sol.p_wt[sol.uts(j, t, s)];
        return v;
    case 4:
        return sol.p_dgr[sol.gts(0, t, s)];
    case 5:
        return sol.p_dgr[sol.gts(1, t, s)];
    case 6: {
        // Effective load sits on bus 6; with the DRP active it includes the shift.
        const double shift = sol.mode == DrpMode::On ? sol.pl_shift[sol.ts(t, s)] : 0.0;
        return sol.p_dgr[sol.gts(2, t, s)] - sol.p_ch[sol.ts(t, s)] + sol.p_disch[sol.ts(t, s)]
             - (scen.load[t] + shift);
    }
    }
    return 0.0;
}

} // namespace mgsched

#include "doctest.h"

#include "mgsched/audit.hpp"
#include "mgsched/mg_model.hpp"
#include "mgsched/milp/branch_bound.hpp"

using namespace mgsched;

namespace {

MgConfig reduced_config(int T, int S, Coupling coupling = Coupling::None) {
    MgConfig cfg = default_config().truncated(T);
    cfg.n_scenarios = S;
    cfg.coupling = coupling;
    return cfg;
}

DecisionSchedule blank_schedule(int T, int S, int G, int NPV, int NWT, DrpMode mode) {
    DecisionSchedule d;
    d.T = T;
    d.S = S;
    d.G = G;
    d.NPV = NPV;
    d.NWT = NWT;
    d.mode = mode;
    d.p_dgr.assign(G * T * S, 0.0);
    d.committed.assign(G * T * S, 0.0);
    d.started.assign(G * T * S, 0.0);
    d.stopped.assign(G * T * S, 0.0);
    d.startup_cost.assign(G * T * S, 0.0);
    d.shutdown_cost.assign(G * T * S, 0.0);
    d.p_buy.assign(T * S, 0.0);
    d.p_sell.assign(T * S, 0.0);
    d.grid_flag.assign(T * S, 0.0);
    d.p_ch.assign(T * S, 0.0);
    d.p_disch.assign(T * S, 0.0);
    d.bess_flag.assign(T * S, 0.0);
    d.soc.assign(T * S, 0.0);
    d.p_pv.assign(NPV * T * S, 0.0);
    d.p_wt.assign(NWT * T * S, 0.0);
    if (mode == DrpMode::On) {
        d.pl_shift.assign(T * S, 0.0);
        d.pl_shift_abs.assign(T * S, 0.0);
    }
    return d;
}

} // namespace

TEST_CASE("binary count of the full wait-and-see instance") {
    MgConfig cfg = reduced_config(24, 5, Coupling::None);
    const auto scen = cfg.make_scenarios();
    const auto built = build_milp(cfg, scen, DrpMode::Off, RiskSpec::wcdrc());
    // Per (t, s): 3 commitment + 1 bess + 1 grid.
    CHECK(built.model.n_integer() == 5 * 24 * (3 + 1 + 1));
    CHECK(built.model.n_integer() == 600);
}

TEST_CASE("cdrc adds exactly S risk variables, S flags and one coupling row") {
    MgConfig cfg = reduced_config(24, 5, Coupling::None);
    const auto scen = cfg.make_scenarios();
    const auto base = build_milp(cfg, scen, DrpMode::Off, RiskSpec::wcdrc());
    const auto cdrc = build_milp(cfg, scen, DrpMode::Off, RiskSpec::cdrc(0.9, 72.0, 0.6));
    CHECK(cdrc.model.n_vars() == base.model.n_vars() + 2 * 5);
    CHECK(cdrc.model.n_integer() == base.model.n_integer() + 5);
    // Three big-M rows per scenario plus the single EDR coupling row.
    CHECK(cdrc.model.n_rows() == base.model.n_rows() + 3 * 5 + 1);
    CHECK(cdrc.model.big_m_registry.size() == 5);
    for (const auto& [name, value] : cdrc.model.big_m_registry) {
        CHECK(value > 0.0);
        CHECK(std::isfinite(value));
        CHECK(name.find("2*(T*MCTL*max_sell") != std::string::npos);
    }
}

TEST_CASE("shared trade collapses the trade schedule to one per hour") {
    MgConfig cfg = reduced_config(24, 5, Coupling::SharedTrade);
    const auto scen = cfg.make_scenarios();
    const auto built = build_milp(cfg, scen, DrpMode::Off, RiskSpec::wcdrc());
    // Grid flags: 24 shared instead of 24*5.
    CHECK(built.model.n_integer() == 5 * 24 * (3 + 1) + 24);
    const auto& L = built.layout;
    for (int t = 0; t < 24; ++t)
        for (int s = 1; s < 5; ++s) {
            CHECK(L.p_buy[L.ts(t, s)] == L.p_buy[L.ts(t, 0)]);
            CHECK(L.p_sell[L.ts(t, s)] == L.p_sell[L.ts(t, 0)]);
            CHECK(L.grid_flag[L.ts(t, s)] == L.grid_flag[L.ts(t, 0)]);
        }
}

TEST_CASE("drp shift bounds follow the participation rate") {
    MgConfig cfg = reduced_config(24, 2, Coupling::None);
    const auto scen = cfg.make_scenarios();
    const auto built = build_milp(cfg, scen, DrpMode::On, RiskSpec::wcdrc());
    const auto& L = built.layout;
    for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 24; ++t) {
            const auto& v = built.model.vars[L.pl_shift[L.ts(t, s)]];
            const double bound = 0.25 * scen.scenarios[s].load[t];
            CHECK(v.lb == doctest::Approx(-bound).epsilon(1e-12));
            CHECK(v.ub == doctest::Approx(bound).epsilon(1e-12));
        }
}

TEST_CASE("profit arithmetic on hand-built schedules") {
    MgConfig cfg = reduced_config(1, 1);
    Scenario sc;
    sc.load = {0.0};
    sc.price_sell = {0.2};
    sc.price_buy = {0.25};
    sc.pv_max.assign(6, {0.0});
    sc.wt_max.assign(2, {0.0});
    sc.prob = 1.0;

    SUBCASE("sales revenue alone") {
        auto d = blank_schedule(1, 1, 3, 6, 2, DrpMode::Off);
        d.p_sell[0] = 10.0;
        CHECK(compute_profit(d, sc, cfg, DrpMode::Off, 0) == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("fuel cost of one generator") {
        auto d = blank_schedule(1, 1, 3, 6, 2, DrpMode::Off);
        d.p_dgr[d.gts(1, 0, 0)] = 6.0; // g=2, b_g = 0.25
        d.committed[d.gts(1, 0, 0)] = 1.0;
        CHECK(compute_profit(d, sc, cfg, DrpMode::Off, 0) == doctest::Approx(-1.5).epsilon(1e-12));
    }
    SUBCASE("zero shift makes the DRP objective equal the plain one") {
        auto d = blank_schedule(1, 1, 3, 6, 2, DrpMode::On);
        d.p_sell[0] = 10.0;
        d.p_dgr[d.gts(2, 0, 0)] = 4.0;
        const double with_drp = compute_profit(d, sc, cfg, DrpMode::On, 0);
        d.mode = DrpMode::Off;
        const double without = compute_profit(d, sc, cfg, DrpMode::Off, 0);
        CHECK(with_drp == doctest::Approx(without).epsilon(1e-12));
    }
}

TEST_CASE("bus injection bookkeeping") {
    MgConfig cfg = reduced_config(1, 1);
    Scenario sc;
    sc.load = {30.0};
    sc.price_sell = {0.2};
    sc.price_buy = {0.25};
    sc.pv_max.assign(6, {8.0});
    sc.wt_max.assign(2, {21.0});
    sc.prob = 1.0;
    auto d = blank_schedule(1, 1, 3, 6, 2, DrpMode::Off);
    for (int i = 0; i < 4; ++i) d.p_pv[d.uts(i, 0, 0)] = 5.0; // bus 1 units
    d.p_pv[d.uts(4, 0, 0)] = 3.0;                             // bus 2 units
    d.p_pv[d.uts(5, 0, 0)] = 4.0;
    d.p_wt[d.uts(0, 0, 0)] = 7.0;
    d.p_wt[d.uts(1, 0, 0)] = 6.0;
    d.p_dgr[d.gts(0, 0, 0)] = 2.0;
    d.p_dgr[d.gts(1, 0, 0)] = 3.0;
    d.p_dgr[d.gts(2, 0, 0)] = 9.0;
    d.p_disch[0] = 10.0;

    CHECK(bus_injection(d, cfg, sc, 1, 0, 0) == doctest::Approx(20.0));
    CHECK(bus_injection(d, cfg, sc, 2, 0, 0) == doctest::Approx(7.0));
    CHECK(bus_injection(d, cfg, sc, 3, 0, 0) == doctest::Approx(13.0));
    CHECK(bus_injection(d, cfg, sc, 4, 0, 0) == doctest::Approx(2.0));
    CHECK(bus_injection(d, cfg, sc, 5, 0, 0) == doctest::Approx(3.0));
    CHECK(bus_injection(d, cfg, sc, 6, 0, 0) == doctest::Approx(9.0 - 0.0 + 10.0 - 30.0));
    CHECK_THROWS_AS(bus_injection(d, cfg, sc, 7, 0, 0), Error);
}

TEST_CASE("reduced instance solves, audits clean, and satisfies the identities") {
    MgConfig cfg = reduced_config(6, 1);
    cfg.seed = 42;
    const auto scen = cfg.make_scenarios();
    const auto built = build_milp(cfg, scen, DrpMode::Off, RiskSpec::wcdrc());
    milp::SolveOptions opts;
    opts.rel_gap = 1e-9;
    const auto sol = milp::branch_and_bound(built.model, opts);
    REQUIRE(sol.status == milp::SolStatus::Optimal);
    const auto sched = extract_schedule(built, sol.x);

    const auto audit = audit_solution(sched, scen, cfg);
    CHECK(audit.clean());
    if (!audit.clean()) MESSAGE(audit.summary());

    // The recomputed profit equals the MILP objective.
    const double profit = compute_profit(sched, scen.scenarios[0], cfg, DrpMode::Off, 0);
    CHECK(profit == doctest::Approx(sol.objective).epsilon(1e-9));

    // Summing bus injections recovers the trade balance.
    for (int t = 0; t < 6; ++t) {
        double total = 0.0;
        for (int w = 1; w <= 6; ++w) total += bus_injection(sched, cfg, scen.scenarios[0], w, t, 0);
        CHECK(total + sched.p_buy[sched.ts(t, 0)] - sched.p_sell[sched.ts(t, 0)]
              == doctest::Approx(0.0).epsilon(1e-6));
    }
}

TEST_CASE("drp instance solves with zero-sum shifting and clean audit") {
    MgConfig cfg = reduced_config(6, 1);
    const auto scen = cfg.make_scenarios();
    const auto built = build_milp(cfg, scen, DrpMode::On, RiskSpec::wcdrc());
    milp::SolveOptions opts;
    opts.rel_gap = 1e-9;
    const auto sol = milp::branch_and_bound(built.model, opts);
    REQUIRE(sol.status == milp::SolStatus::Optimal);
    const auto sched = extract_schedule(built, sol.x);
    const auto audit = audit_solution(sched, scen, cfg);
    CHECK(audit.clean());
    if (!audit.clean()) MESSAGE(audit.summary());
    double sum = 0.0;
    for (int t = 0; t < 6; ++t) sum += sched.pl_shift[sched.ts(t, 0)];
    CHECK(sum == doctest::Approx(0.0).epsilon(1e-9));
    const double profit = compute_profit(sched, scen.scenarios[0], cfg, DrpMode::On, 0);
    CHECK(profit == doctest::Approx(sol.objective).epsilon(1e-9));
}

TEST_CASE("audit flags forced violations") {
    MgConfig cfg = reduced_config(4, 1);
    const auto scen = cfg.make_scenarios();
    const auto built = build_milp(cfg, scen, DrpMode::Off, RiskSpec::wcdrc());
    milp::SolveOptions opts;
    const auto sol = milp::branch_and_bound(built.model, opts);
    REQUIRE(sol.status == milp::SolStatus::Optimal);
    auto sched = extract_schedule(built, sol.x);

    SUBCASE("soc window breach names the SOC family") {
        sched.soc[sched.ts(1, 0)] = 0.1; // below soc_min = 0.2
        const auto audit = audit_solution(sched, scen, cfg);
        REQUIRE_FALSE(audit.clean());
        bool found = false;
        for (const auto& v : audit.violations)
            if (v.family.find("eq13") != std::string::npos) found = true;
        CHECK(found);
    }
    SUBCASE("simultaneous charge and discharge trips the exclusivity gates") {
        sched.p_ch[sched.ts(2, 0)] = 5.0;
        sched.p_disch[sched.ts(2, 0)] = 5.0;
        const auto audit = audit_solution(sched, scen, cfg);
        REQUIRE_FALSE(audit.clean());
        bool gate = false;
        for (const auto& v : audit.violations)
            if (v.family.find("eq14") != std::string::npos || v.family.find("eq15") != std::string::npos)
                gate = true;
        CHECK(gate);
    }
}

TEST_CASE("startup and shutdown costs are paid once per commitment change") {
    MgConfig cfg = reduced_config(5, 1);
    for (auto& d : cfg.dgrs) {
        d.startup_cost = 0.4;
        d.shutdown_cost = 0.3;
    }
    const auto scen = cfg.make_scenarios();
    const auto built = build_milp(cfg, scen, DrpMode::Off, RiskSpec::wcdrc());
    milp::SolveOptions opts;
    opts.rel_gap = 1e-9;
    const auto sol = milp::branch_and_bound(built.model, opts);
    REQUIRE(sol.status == milp::SolStatus::Optimal);
    const auto sched = extract_schedule(built, sol.x);
    const auto audit = audit_solution(sched, scen, cfg);
    CHECK(audit.clean());
    if (!audit.clean()) MESSAGE(audit.summary());
    for (int g = 0; g < 3; ++g) {
        double prev = 0.0; // cold start
        for (int t = 0; t < 5; ++t) {
            const int k = sched.gts(g, t, 0);
            const double vp = sched.committed[k];
            // Started/stopped settle on exact 0/1 and the cost variables sit
            // on their lower-bound envelopes at the optimum.
            CHECK(sched.started[k] == doctest::Approx(std::max(0.0, vp - prev)).epsilon(1e-9));
            CHECK(sched.stopped[k] == doctest::Approx(std::max(0.0, prev - vp)).epsilon(1e-9));
            CHECK(sched.startup_cost[k]
                  == doctest::Approx(0.4 * std::max(0.0, vp - prev)).epsilon(1e-9));
            CHECK(sched.shutdown_cost[k]
                  == doctest::Approx(0.3 * std::max(0.0, prev - vp)).epsilon(1e-9));
            prev = vp;
        }
    }
    // Profit still reconciles with the objective when UC costs are active.
    const double profit = compute_profit(sched, scen.scenarios[0], cfg, DrpMode::Off, 0);
    CHECK(profit == doctest::Approx(sol.objective).epsilon(1e-9));
}

TEST_CASE("infeasible-by-construction load is flagged at build time and by the solver") {
    MgConfig cfg = reduced_config(2, 1);
    // Load far beyond total generation plus the trade cap.
    for (auto& h : cfg.load_hours) h = DistributionSpec::normal(500.0, 0.0);
    const auto scen = cfg.make_scenarios();
    const auto built = build_milp(cfg, scen, DrpMode::Off, RiskSpec::wcdrc());
    CHECK_FALSE(built.warnings.empty());
    if (!built.warnings.empty())
        CHECK(built.warnings.front().find("exceeds the maximum supply") != std::string::npos);
    const auto sol = milp::branch_and_bound(built.model);
    CHECK(sol.status == milp::SolStatus::Infeasible);

    // A healthy instance builds without warnings.
    const MgConfig ok_cfg = reduced_config(2, 1);
    const auto ok = build_milp(ok_cfg, ok_cfg.make_scenarios(), DrpMode::Off, RiskSpec::wcdrc());
    CHECK(ok.warnings.empty());
}

#ifndef MGSCHED_MG_MODEL_HPP
#define MGSCHED_MG_MODEL_HPP

#include <string>
#include <vector>

#include "mgsched/config.hpp"
#include "mgsched/milp/model.hpp"
#include "mgsched/scenarios.hpp"

namespace mgsched {

enum class DrpMode { Off, On };

struct RiskSpec {
    enum class Kind { Wcdrc, Cdrc } kind = Kind::Wcdrc;
    double lambda = 1.0;
    double target = 0.0;
    double edr_baseline = 0.0;

    static RiskSpec wcdrc() { return RiskSpec{}; }
    static RiskSpec cdrc(double lambda, double target, double edr_baseline) {
        return RiskSpec{Kind::Cdrc, lambda, target, edr_baseline};
    }
};

// Variable index bookkeeping for one built instance.  Indices are 0-based;
// -1 marks a variable family that is absent in this instance.
struct ModelLayout {
    int T = 0, S = 0, G = 0, NPV = 0, NWT = 0;
    DrpMode mode = DrpMode::Off;
    RiskSpec risk;
    Coupling coupling = Coupling::None;

    // [g][t][s]
    std::vector<int> p_dgr, committed, started, stopped, suc, sdc;
    // [t][s] (shared trade: the same id for every s)
    std::vector<int> p_buy, p_sell, grid_flag;
    std::vector<int> p_ch, p_disch, bess_flag, soc;
    // [i][t][s] / [j][t][s]
    std::vector<int> p_pv, p_wt;
    // [t][s], DRP only
    std::vector<int> pl_shift, shift_up, shift_dn;
    // [s], CDRC only
    std::vector<int> risk_var, below_flag;

    int gts(int g, int t, int s) const { return (g * T + t) * S + s; }
    int ts(int t, int s) const { return t * S + s; }
    int uts(int u, int t, int s) const { return (u * T + t) * S + s; }
};

struct BuiltModel {
    milp::MilpModel model;
    ModelLayout layout;
    // Infeasible-by-construction hours (load beyond all supply plus the trade
    // cap) are reported here, not raised.
    std::vector<std::string> warnings;
};

// Translates (config, scenarios, DRP mode, risk settings) into a maximization
// MILP.  The trade caps, commitment/startup/shutdown linking, ramps, capacity
// gating, BESS window and dynamics, buy/sell exclusivity, power balance and
// RES caps are always present; DRP adds the shiftable-load block and its
// incentive cost; CDRC adds the per-scenario big-M risk pair and the single
// EDR coupling row.
BuiltModel build_milp(const MgConfig& cfg, const ScenarioSet& scen, DrpMode mode,
                      const RiskSpec& risk);

// Decision values of one solved instance, indexed like the layout.
struct DecisionSchedule {
    int T = 0, S = 0, G = 0, NPV = 0, NWT = 0;
    DrpMode mode = DrpMode::Off;
    RiskSpec risk;
    Coupling coupling = Coupling::None;

    std::vector<double> p_dgr, committed, started, stopped, startup_cost, shutdown_cost;
    std::vector<double> p_buy, p_sell, grid_flag;
    std::vector<double> p_ch, p_disch, bess_flag, soc;
    std::vector<double> p_pv, p_wt;
    std::vector<double> pl_shift, pl_shift_abs;
    std::vector<double> risk_value, below_target_flag; // per scenario

    int gts(int g, int t, int s) const { return (g * T + t) * S + s; }
    int ts(int t, int s) const { return t * S + s; }
    int uts(int u, int t, int s) const { return (u * T + t) * S + s; }
};

DecisionSchedule extract_schedule(const BuiltModel& built, const std::vector<double>& x);

// Scenario profit per the objective definition: sales revenue minus purchase,
// fuel, commitment, shutdown and startup costs, minus the DRP incentive cost
// when the DRP is active.
double compute_profit(const DecisionSchedule& sol, const Scenario& scen, const MgConfig& cfg,
                      DrpMode mode, int s);

// Injected power at bus w (1..6) from the solved dispatch: PV sums on buses
// 1-2, WT sum on bus 3, one DGR on buses 4-5, and DGR3 - charge + discharge
// - effective load on bus 6.
double bus_injection(const DecisionSchedule& sol, const MgConfig& cfg, const Scenario& scen,
                     int w, int t, int s);

} // namespace mgsched

#endif

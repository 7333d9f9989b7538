#ifndef MGSCHED_CONFIG_HPP
#define MGSCHED_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mgsched/scenarios.hpp"

namespace mgsched {

// One dispatchable diesel generator.
struct DgrParams {
    double b_g = 0.0;           // linear fuel cost [$/kWh]
    double c_g = 0.0;           // fixed cost per committed hour [$]
    double p_min = 0.0;         // [kW]
    double p_max = 0.0;         // [kW]
    double up_rate = 0.0;       // [kW/h]
    double down_rate = 0.0;     // [kW/h]
    double startup_cost = 0.0;  // [$]
    double shutdown_cost = 0.0; // [$]

    bool operator==(const DgrParams&) const = default;
};

struct BessParams {
    double soc_min = 0.2;
    double soc_max = 1.0;
    double soc_init = 0.7;
    double p_ch_max = 50.0;    // [kW]
    double p_disch_max = 50.0; // [kW]
    double eta_ch = 1.0;
    double eta_disch = 1.0;
    double s_base = 50.0;      // per-unit base [kW]

    bool operator==(const BessParams&) const = default;
};

struct GridParams {
    double mctl = 37.5; // trade cap [kW]

    bool operator==(const GridParams&) const = default;
};

// Elasticity matrix: explicit 24x24 values, or the diagonal/off-diagonal
// default pattern.
struct ElasticityMatrix {
    double diagonal = -0.2;
    double off_diagonal = 0.01;
    std::vector<std::vector<double>> matrix; // when non-empty, overrides the pattern

    double at(int t, int k) const;
    void validate(int horizon) const; // diagonal <= 0, off-diagonal >= 0

    // Square numeric CSV without a header, one row per hour.
    static ElasticityMatrix from_csv(const std::filesystem::path& path);

    bool operator==(const ElasticityMatrix&) const = default;
};

struct DrpParams {
    double participation = 0.25;
    std::vector<double> incentive; // A(t) [$/kWh], sized by horizon
    std::vector<double> penalty;   // pen(t), zero by default
    std::vector<double> rho0;      // initial prices [$/kWh]
    ElasticityMatrix elasticity;

    bool operator==(const DrpParams&) const = default;
};

struct RiskSettings {
    std::vector<double> lambda_grid = {0.99, 0.95, 0.9, 0.85, 0.8, 0.75, 0.7};
    std::vector<double> participation_grid = {0.20, 0.25, 0.30};

    bool operator==(const RiskSettings&) const = default;
};

enum class SolverChoice { Auto, Internal, External };

struct SolverSettings {
    SolverChoice choice = SolverChoice::Auto;
    double time_limit_sec = 600.0; // internal fallback budget per solve
    double rel_gap = 1e-9;
    double int_tol = 1e-6;

    bool operator==(const SolverSettings&) const = default;
};

// Cross-scenario coupling of the trade schedule.  None is the bare
// wait-and-see build; SharedTrade fixes the day-ahead buy/sell schedule
// before the uncertainty realizes (used by the study pipeline, where the
// risk constraint needs room to trade profit between scenarios).
enum class Coupling { None, SharedTrade };

struct PvGroup {
    int bus = 1; // 1 or 2
    int count = 1;
    double capacity_kw = 8.0; // per unit
    std::vector<DistributionSpec> hours;

    bool operator==(const PvGroup&) const = default;
};

struct WtGroup {
    int count = 1;
    double capacity_kw = 21.0; // per unit
    std::vector<DistributionSpec> hours;

    bool operator==(const WtGroup&) const = default;
};

struct MgConfig {
    std::string name = "mg";
    int horizon = 24;
    int n_scenarios = 5;
    std::uint64_t seed = 42;
    Coupling coupling = Coupling::None;

    std::vector<DgrParams> dgrs; // DGR g sits on bus 3+g
    BessParams bess;
    GridParams grid;
    DrpParams drp;
    std::vector<PvGroup> pv_groups; // buses 1-2
    WtGroup wt_group;               // bus 3

    std::vector<DistributionSpec> load_hours;
    std::vector<DistributionSpec> price_sell_hours;
    std::vector<DistributionSpec> price_buy_hours;
    PriceMode price_mode = PriceMode::SharedDraw;

    RiskSettings risk;
    SolverSettings solver;

    int n_pv_units() const;
    int n_wt_units() const;
    int pv_bus(int unit) const;             // 0-based unit -> bus number
    double pv_capacity(int unit) const;     // 0-based
    double wt_capacity(int unit) const;

    void validate() const;

    // Profile map for build_scenarios: load, price_sell, price_buy,
    // pv_1..pv_N, wt_1..wt_M.
    std::map<std::string, HourlyProfileSpec> profile_map() const;
    ScenarioSet make_scenarios() const;

    // Copy with the horizon truncated to the first T hours (desk-scale runs).
    MgConfig truncated(int T) const;
    // Copy with a different DRP participation rate.
    MgConfig with_participation(double participation) const;
};

// The Table I generators plus the bundled synthetic day profiles (evening
// load peak, midday PV bell, flat-ish wind, day/night price split).
MgConfig default_config();

MgConfig load_config(const std::filesystem::path& json_path);
MgConfig config_from_json(const std::string& json_text,
                          const std::filesystem::path& base_dir = ".");
std::string config_to_json(const MgConfig& cfg);

} // namespace mgsched

#endif

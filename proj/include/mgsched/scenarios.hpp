#ifndef MGSCHED_SCENARIOS_HPP
#define MGSCHED_SCENARIOS_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mgsched/distributions.hpp"

namespace mgsched {

// Per-hour distribution specs for one quantity plus its scale:
// installed capacity in kW for RES profiles, 1.0 for load/price.
struct HourlyProfileSpec {
    std::vector<DistributionSpec> hours; // one entry per hour of the horizon
    double scale = 1.0;

    void validate(int horizon) const;

    bool operator==(const HourlyProfileSpec&) const = default;
};

// One equiprobable realization of a day.
struct Scenario {
    std::vector<double> load;        // [T] kW
    std::vector<double> price_sell;  // [T] $/kWh
    std::vector<double> price_buy;   // [T] $/kWh
    std::vector<std::vector<double>> pv_max; // [unit][T] kW
    std::vector<std::vector<double>> wt_max; // [unit][T] kW
    double prob = 1.0;

    bool operator==(const Scenario&) const = default;
};

struct ScenarioSet {
    std::vector<Scenario> scenarios;
    std::uint64_t seed = 0;

    int horizon() const { return scenarios.empty() ? 0 : static_cast<int>(scenarios[0].load.size()); }
    int size() const { return static_cast<int>(scenarios.size()); }
    int n_pv() const { return scenarios.empty() ? 0 : static_cast<int>(scenarios[0].pv_max.size()); }
    int n_wt() const { return scenarios.empty() ? 0 : static_cast<int>(scenarios[0].wt_max.size()); }

    // Checks shape consistency, nonnegativity and sum(prob) == 1 (tol 1e-12).
    void validate() const;

    bool operator==(const ScenarioSet&) const = default;
};

// Whether buy and sell prices share one normal draw per hour (default) or are
// sampled independently.
enum class PriceMode { SharedDraw, Independent };

// Profile keys: "load", "price_sell", "price_buy", "pv_1".."pv_N", "wt_1".."wt_M".
// Pure function of its arguments; scenario s uses the substream (seed, s).
ScenarioSet build_scenarios(const std::map<std::string, HourlyProfileSpec>& profiles,
                            int n_scenarios, std::uint64_t seed,
                            PriceMode price_mode = PriceMode::SharedDraw);

// CSV bundle: one file per quantity, rows = hours, columns = scenarios.
void write_scenario_bundle(const ScenarioSet& set, const std::filesystem::path& dir);
ScenarioSet read_scenario_bundle(const std::filesystem::path& dir, int n_pv, int n_wt);

} // namespace mgsched

#endif

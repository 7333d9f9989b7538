#ifndef MGSCHED_PIPELINE_HPP
#define MGSCHED_PIPELINE_HPP

#include <filesystem>
#include <span>

#include "mgsched/audit.hpp"
#include "mgsched/mg_model.hpp"
#include "mgsched/risk.hpp"
#include "mgsched/solve.hpp"

namespace mgsched {

// One WCDRC study (step 3 without the DRP, step 5 with it).
struct StepResult {
    DrpMode mode = DrpMode::Off;
    std::vector<double> profits; // per scenario
    std::vector<double> risks;   // post-hoc shortfalls against the target
    double target = 0.0;         // probability-weighted average profit
    double edr_baseline = 0.0;
    double avg_profit = 0.0;
    DecisionSchedule schedule;
    milp::SolStatus status = milp::SolStatus::Optimal;
    double objective = 0.0; // probability-weighted, equals avg_profit
    long nodes = 0;
    double wall_sec = 0.0;
};

// One CDRC solve at a fixed lambda.
struct LambdaResult {
    double lambda = 1.0;
    milp::SolStatus status = milp::SolStatus::Optimal;
    std::vector<double> profits;
    double avg_profit = 0.0;
    double total_rip = 0.0; // sum over scenarios
    double avg_rip = 0.0;   // probability-weighted
    double achieved_edr = 0.0;
    double edr_bound_value = 0.0;
    bool binding = false;
    double profit_reduction_pct = 0.0; // vs the matching WCDRC run
    double rip_reduction_pct = 0.0;
    DecisionSchedule schedule;
    double wall_sec = 0.0;
};

struct SweepResult {
    DrpMode mode = DrpMode::Off;
    std::vector<LambdaResult> rows;
};

struct SensitivitySlice {
    double participation = 0.25;
    StepResult wcdrc;
    SweepResult cdrc;
};

struct StudyMeta {
    std::uint64_t seed = 0;
    std::string solver;
    double rel_gap = 0.0;
    double int_tol = 0.0;
    double wall_sec = 0.0;
};

struct StudyReport {
    StepResult step3, step5;
    SweepResult step4, step6;
    std::vector<SensitivitySlice> step7;
    StudyMeta meta;
};

// Step 3: per-scenario profit maximization without the DRP or risk rows;
// the target is the average profit and the baseline EDR follows from the
// post-hoc shortfalls.  Decomposes per scenario unless the config couples
// the trade schedule.
StepResult run_step3_wcdrc(const MgConfig& cfg, const ScenarioSet& scen, const SolveContext& ctx);

// Step 4: joint CDRC solve per lambda (the EDR row couples the scenarios).
SweepResult run_step4_cdrc(const MgConfig& cfg, const ScenarioSet& scen, const StepResult& base,
                           const SolveContext& ctx, std::span<const double> lambda_grid);

// Steps 5/6: the DRP-enabled variants with their own target and baseline.
StepResult run_step5_drp_wcdrc(const MgConfig& cfg, const ScenarioSet& scen, const SolveContext& ctx);
SweepResult run_step6_drp_cdrc(const MgConfig& cfg, const ScenarioSet& scen, const StepResult& base,
                               const SolveContext& ctx, std::span<const double> lambda_grid);

// Step 7: rerun steps 5-6 per participation rate (the DRP target is
// recomputed for each rate).
std::vector<SensitivitySlice> run_step7_sensitivity(const MgConfig& cfg, const ScenarioSet& scen,
                                                    const SolveContext& ctx);

StudyReport run_study(const MgConfig& cfg, const SolveContext& ctx);

// table2.csv .. table7.csv, sensitivity_profit.csv, sensitivity_rip.csv and
// summary.json under out_dir.
void write_study_report(const StudyReport& report, const std::filesystem::path& out_dir);

// Human-readable digest (targets, lambda sweep, DRP deltas).
std::string study_summary_text(const StudyReport& report);

} // namespace mgsched

#endif

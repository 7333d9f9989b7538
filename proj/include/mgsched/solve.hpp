#ifndef MGSCHED_SOLVE_HPP
#define MGSCHED_SOLVE_HPP

#include <string>

#include "mgsched/config.hpp"
#include "mgsched/milp/branch_bound.hpp"
#include "mgsched/milp/external.hpp"

namespace mgsched {

struct SolveContext {
    SolverChoice choice = SolverChoice::Auto;
    std::string external_cmd; // command template; empty falls back to MG_EXT_SOLVER
    milp::SolveOptions opts;

    static SolveContext from_config(const MgConfig& cfg);
    // The command that would be used, or empty when none is configured.
    std::string resolved_external_cmd() const;
};

// Dispatches to the internal branch and bound or the external bridge.  Auto
// prefers the external solver whenever a command is configured and falls back
// to the internal solver (bounded by opts.time_limit_sec) otherwise.
milp::Solution solve_model(const milp::MilpModel& model, const SolveContext& ctx);

} // namespace mgsched

#endif

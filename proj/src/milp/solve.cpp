#include "mgsched/solve.hpp"

namespace mgsched {

SolveContext SolveContext::from_config(const MgConfig& cfg) {
    SolveContext ctx;
    ctx.choice = cfg.solver.choice;
    ctx.opts.rel_gap = cfg.solver.rel_gap;
    ctx.opts.int_tol = cfg.solver.int_tol;
    ctx.opts.time_limit_sec = cfg.solver.time_limit_sec;
    return ctx;
}

std::string SolveContext::resolved_external_cmd() const {
    if (!external_cmd.empty()) return external_cmd;
    if (auto env = milp::external_solver_from_env()) return *env;
    return {};
}

milp::Solution solve_model(const milp::MilpModel& model, const SolveContext& ctx) {
    const std::string cmd = ctx.resolved_external_cmd();
    switch (ctx.choice) {
    case SolverChoice::External:
        if (cmd.empty())
            throw BridgeError("external solver requested but no command is configured (set "
                              + std::string(milp::kExtSolverEnv) + ")");
        return milp::external_solve(model, cmd);
    case SolverChoice::Internal:
        return milp::branch_and_bound(model, ctx.opts);
    case SolverChoice::Auto:
        if (!cmd.empty()) return milp::external_solve(model, cmd);
        return milp::branch_and_bound(model, ctx.opts);
    }
    throw Error("unknown solver choice");
}

} // namespace mgsched

#ifndef MGSCHED_MILP_SIMPLEX_HPP
#define MGSCHED_MILP_SIMPLEX_HPP

#include <span>

#include "mgsched/milp/model.hpp"

namespace mgsched::milp {

struct LpOptions {
    double feas_tol = 1e-9;   // primal feasibility at the returned point
    double opt_tol = 1e-7;    // dual feasibility (reduced-cost) tolerance
    double pivot_tol = 1e-10;
    long iter_limit = -1;     // < 0: scaled default
    double deadline_sec = -1; // < 0: none
};

struct LpResult {
    SolStatus status = SolStatus::Infeasible; // Optimal / Infeasible / Unbounded
    double objective = std::nan("");          // model sense, includes obj_constant
    std::vector<double> x;                    // structural assignment
    std::vector<double> duals;                // per row, model sense
    std::vector<double> reduced_costs;        // per structural variable, model sense
    long iterations = 0;
    double primal_residual = 0.0;             // max constraint/bound violation at x
    double dual_residual = 0.0;               // max reduced-cost sign violation
};

// Bounded-variable primal simplex on the LP relaxation (integrality ignored).
// Two phases with artificials, Dantzig pricing with a Bland fallback against
// cycling.  The returned point is verified: primal feasibility <= feas_tol and
// a reduced-cost certificate <= opt_tol, otherwise a SolveError is thrown.
LpResult solve_lp(const MilpModel& model, const LpOptions& opts = {});

// Same, with per-variable bound overrides (used by branch and bound).
LpResult solve_lp_with_bounds(const MilpModel& model, std::span<const double> lb,
                              std::span<const double> ub, const LpOptions& opts = {});

} // namespace mgsched::milp

#endif

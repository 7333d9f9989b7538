#ifndef MGSCHED_MILP_BRANCH_BOUND_HPP
#define MGSCHED_MILP_BRANCH_BOUND_HPP

#include "mgsched/milp/model.hpp"
#include "mgsched/milp/simplex.hpp"

namespace mgsched::milp {

// Exact branch and bound over the integral variables: most-fractional
// branching, best-bound node selection, deterministic tie-breaking by lowest
// index.  All integral variables must be bounded.
Solution branch_and_bound(const MilpModel& model, const SolveOptions& opts = {});

} // namespace mgsched::milp

#endif

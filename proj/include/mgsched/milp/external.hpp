#ifndef MGSCHED_MILP_EXTERNAL_HPP
#define MGSCHED_MILP_EXTERNAL_HPP

#include <optional>
#include <string>

#include "mgsched/milp/model.hpp"

namespace mgsched::milp {

// Name of the environment variable holding the external solver command
// template, e.g.  MG_EXT_SOLVER="python3 tools/mps_solve.py --mps {mps} --out {sol}".
inline constexpr const char* kExtSolverEnv = "MG_EXT_SOLVER";

struct ExternalOptions {
    bool keep_temp = false;      // also honoured via MG_KEEP_TEMP
    double feas_check_tol = 1e-6;
    double int_snap_tol = 1e-5;
};

// Writes the model as MPS to a temp directory, runs the command template
// ({mps} and {sol} placeholders are mandatory), parses the solution file and
// cross-checks feasibility and the reported objective.  The solution file is
// either "name value" pairs or a two-column CSV with a header; the reserved
// names "status" and "objective" carry solver metadata.  Any failure raises
// BridgeError; an infeasible-claimed-optimal point is an error, not a result.
Solution external_solve(const MilpModel& model, const std::string& command_template,
                        const ExternalOptions& opts = {});

// Command template from MG_EXT_SOLVER, if set and non-empty.
std::optional<std::string> external_solver_from_env();

} // namespace mgsched::milp

#endif

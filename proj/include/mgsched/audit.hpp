#ifndef MGSCHED_AUDIT_HPP
#define MGSCHED_AUDIT_HPP

#include <string>
#include <vector>

#include "mgsched/mg_model.hpp"

namespace mgsched {

struct Violation {
    std::string family;  // e.g. "eq16_soc"
    std::string indices; // e.g. "g=2 t=7 s=1"
    double residual = 0.0;
};

struct AuditReport {
    std::vector<Violation> violations;
    bool clean() const { return violations.empty(); }
    std::string summary() const;
};

// Re-checks every constraint family of the microgrid model against a solved
// schedule: trade caps, commitment linking and cost floors, ramps, capacity
// gating, the SOC window/dynamics/end condition, buy-sell and
// charge-discharge exclusivity (including the product forms), power balance,
// RES caps, the DRP bounds/zero-sum/|shift| complementarity, the risk
// identity risk = max(0, target - profit) and the EDR coupling, and 0/1
// integrality of the flag families.  Empty report iff feasible at `tol`.
AuditReport audit_solution(const DecisionSchedule& sol, const ScenarioSet& scen,
                           const MgConfig& cfg, double tol = 1e-6);

} // namespace mgsched

#endif

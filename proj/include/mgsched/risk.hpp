#ifndef MGSCHED_RISK_HPP
#define MGSCHED_RISK_HPP

#include <span>

#include "mgsched/common.hpp"

namespace mgsched {

// Shortfall below the target profit: max(0, target - profit).
double downside_risk(double profit, double target);

// Probability-weighted mean shortfall.  Throws if probabilities do not sum
// to 1 (tol 1e-9) or sizes differ.
double expected_downside_risk(std::span<const double> risks, std::span<const double> probs);

// Right-hand side of the risk coupling constraint: lambda * baseline EDR.
double edr_bound(double lambda, double edr_baseline);

} // namespace mgsched

#endif

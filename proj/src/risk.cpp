#include "mgsched/risk.hpp"

#include <cmath>
#include <string>

namespace mgsched {

double downside_risk(double profit, double target) {
    if (!std::isfinite(profit) || !std::isfinite(target))
        throw Error("downside_risk: non-finite input");
    return std::max(0.0, target - profit);
}

double expected_downside_risk(std::span<const double> risks, std::span<const double> probs) {
    if (risks.size() != probs.size())
        throw Error("expected_downside_risk: size mismatch");
    double psum = 0.0, edr = 0.0;
    for (size_t s = 0; s < risks.size(); ++s) {
        psum += probs[s];
        edr += probs[s] * risks[s];
    }
    if (std::abs(psum - 1.0) > 1e-9)
        throw Error("expected_downside_risk: probabilities sum to " + std::to_string(psum));
    return edr;
}

double edr_bound(double lambda, double edr_baseline) {
    if (!(lambda > 0.0 && lambda <= 1.0))
        throw Error("edr_bound: lambda must lie in (0, 1]");
    if (!(edr_baseline >= 0.0))
        throw Error("edr_bound: baseline EDR must be >= 0");
    return lambda * edr_baseline;
}

} // namespace mgsched

#include "mgsched/drp.hpp"

#include <cmath>

namespace mgsched {

std::vector<double> responsive_load(std::span<const double> pl0, std::span<const double> rho,
                                    const DrpParams& params) {
    const int T = static_cast<int>(pl0.size());
    if (static_cast<int>(rho.size()) != T || static_cast<int>(params.rho0.size()) != T
        || static_cast<int>(params.incentive.size()) != T
        || static_cast<int>(params.penalty.size()) != T)
        throw ConfigError("responsive_load: horizon mismatch");
    for (double r0 : params.rho0)
        if (r0 == 0.0) throw std::domain_error("responsive_load: rho0 contains a zero price");
    std::vector<double> out(T);
    for (int t = 0; t < T; ++t) {
        double factor = 1.0;
        for (int k = 0; k < T; ++k) {
            const double term = (rho[k] - params.rho0[k] + params.incentive[k] + params.penalty[k])
                              / params.rho0[k];
            factor += params.elasticity.at(t, k) * term;
        }
        out[t] = pl0[t] * factor;
    }
    return out;
}

double drp_cost(std::span<const double> pl_shift_abs, std::span<const double> incentive) {
    if (pl_shift_abs.size() != incentive.size())
        throw ConfigError("drp_cost: size mismatch");
    double cost = 0.0;
    for (size_t t = 0; t < pl_shift_abs.size(); ++t) {
        if (pl_shift_abs[t] < 0.0)
            throw std::domain_error("drp_cost: negative absolute shift");
        cost += pl_shift_abs[t] * incentive[t];
    }
    return cost;
}

DrpConstraintBlock drp_constraint_block(std::span<const double> pl0, const DrpParams& params) {
    DrpConstraintBlock block;
    block.shift_lb.resize(pl0.size());
    block.shift_ub.resize(pl0.size());
    for (size_t t = 0; t < pl0.size(); ++t) {
        block.shift_ub[t] = params.participation * pl0[t];
        block.shift_lb[t] = -block.shift_ub[t];
    }
    return block;
}

} // namespace mgsched

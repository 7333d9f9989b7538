#ifndef MGSCHED_DRP_HPP
#define MGSCHED_DRP_HPP

#include <span>
#include <vector>

#include "mgsched/config.hpp"

namespace mgsched {

// Price/incentive elasticity load model: the responsive load per hour given
// realized prices, incentives and penalties.  Analysis mode only; the
// optimization uses the shiftable-load decision variables instead, where
// prices are data.
std::vector<double> responsive_load(std::span<const double> pl0, std::span<const double> rho,
                                    const DrpParams& params);

// Total incentive paid for the absolute shifted load.
double drp_cost(std::span<const double> pl_shift_abs, std::span<const double> incentive);

// Constraint template for the shiftable-load block: per-hour shift bounds
// (participation * pl0), the zero-sum coupling, and the split-variable
// linearization of |shift|.
struct DrpConstraintBlock {
    std::vector<double> shift_lb; // -participation * pl0[t]
    std::vector<double> shift_ub; // +participation * pl0[t]
    bool zero_sum = true;         // sum_t shift_t == 0
    bool split_abs = true;        // shift = u+ - u-, |shift| = u+ + u-
};

DrpConstraintBlock drp_constraint_block(std::span<const double> pl0, const DrpParams& params);

} // namespace mgsched

#endif

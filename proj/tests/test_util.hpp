#ifndef MGSCHED_TEST_UTIL_HPP
#define MGSCHED_TEST_UTIL_HPP

#include <cmath>
#include <functional>
#include <optional>
#include <random>

#include "mgsched/milp/branch_bound.hpp"
#include "mgsched/milp/model.hpp"
#include "mgsched/milp/simplex.hpp"

namespace mgtest {

// Adaptive Simpson quadrature; independent of any library numerics.
inline double simpson(const std::function<double(double)>& f, double a, double b, double fa,
                      double fb, double fm, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson(f, a, m, fa, fm, flm, tol / 2.0, depth - 1)
         + simpson(f, m, b, fm, fb, frm, tol / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-9) {
    const double m = 0.5 * (a + b);
    return simpson(f, a, b, f(a), f(b), f(m), tol, 48);
}

// Random mixed-integer models: binaries plus bounded continuous variables,
// random sparse rows.  Feasibility is not guaranteed; the oracle and the
// solver must agree on it.
inline mgsched::milp::MilpModel random_milp(std::mt19937_64& rng, int max_bin, int max_cont) {
    using namespace mgsched::milp;
    std::uniform_int_distribution<int> nb(0, max_bin), nc(1, max_cont);
    std::uniform_real_distribution<double> coef(-5.0, 5.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    MilpModel m;
    m.name = "random";
    m.sense = unit(rng) < 0.5 ? Sense::Max : Sense::Min;
    const int n_bin = nb(rng), n_cont = nc(rng);
    for (int j = 0; j < n_bin; ++j)
        m.add_var("b" + std::to_string(j), 0.0, 1.0, true);
    for (int j = 0; j < n_cont; ++j) {
        const double lb = std::round(coef(rng));
        const double ub = lb + std::round(10.0 * unit(rng));
        m.add_var("x" + std::to_string(j), lb, ub, false);
    }
    const int n = m.n_vars();
    // Most models are anchored to a random interior point so they are
    // feasible; the rest keep fully random right-hand sides to exercise
    // infeasibility detection.
    const bool anchored = unit(rng) < 0.7;
    std::vector<double> x0(n);
    for (int j = 0; j < n; ++j) {
        if (m.vars[j].integral) x0[j] = unit(rng) < 0.5 ? 0.0 : 1.0;
        else x0[j] = m.vars[j].lb + unit(rng) * (m.vars[j].ub - m.vars[j].lb);
    }
    std::uniform_int_distribution<int> nrows(1, std::max(2, n));
    std::uniform_int_distribution<int> pick(0, n - 1);
    const int rows = nrows(rng);
    for (int i = 0; i < rows; ++i) {
        std::uniform_int_distribution<int> nnz(1, std::min(4, n));
        const int k = nnz(rng);
        std::vector<std::pair<int, double>> cs;
        for (int e = 0; e < k; ++e) {
            const int j = pick(rng);
            const double a = std::round(2.0 * coef(rng)) / 2.0;
            if (a != 0.0) cs.emplace_back(j, a);
        }
        if (cs.empty()) continue;
        const double r = unit(rng);
        const Rel rel = r < 0.45 ? Rel::Le : r < 0.9 ? Rel::Ge : Rel::Eq;
        double rhs;
        if (anchored) {
            double at_x0 = 0.0;
            for (const auto& [j, a] : cs) at_x0 += a * x0[j];
            const double slack = rel == Rel::Eq ? 0.0 : std::abs(coef(rng));
            rhs = rel == Rel::Le ? at_x0 + slack : rel == Rel::Ge ? at_x0 - slack : at_x0;
        } else {
            rhs = std::round(4.0 * coef(rng)) / 2.0;
        }
        m.add_row("r" + std::to_string(i), std::move(cs), rel, rhs);
    }
    for (int j = 0; j < n; ++j) {
        const double c = std::round(4.0 * coef(rng)) / 4.0;
        if (c != 0.0) m.objective.emplace_back(j, c);
    }
    return m;
}

// Exhaustive enumeration over all binary patterns, each evaluated by the LP
// kernel.  nullopt when every pattern is infeasible.
inline std::optional<double> enumeration_oracle(const mgsched::milp::MilpModel& m) {
    using namespace mgsched::milp;
    std::vector<int> bins;
    for (int j = 0; j < m.n_vars(); ++j)
        if (m.vars[j].integral) bins.push_back(j);
    std::vector<double> lb(m.n_vars()), ub(m.n_vars());
    for (int j = 0; j < m.n_vars(); ++j) {
        lb[j] = m.vars[j].lb;
        ub[j] = m.vars[j].ub;
    }
    std::optional<double> best;
    const bool maximize = m.sense == Sense::Max;
    const long patterns = 1L << bins.size();
    for (long mask = 0; mask < patterns; ++mask) {
        for (size_t k = 0; k < bins.size(); ++k) {
            const double v = (mask >> k) & 1 ? 1.0 : 0.0;
            lb[bins[k]] = v;
            ub[bins[k]] = v;
        }
        LpResult r = solve_lp_with_bounds(m, lb, ub);
        if (r.status != SolStatus::Optimal) continue;
        if (!best || (maximize ? r.objective > *best : r.objective < *best)) best = r.objective;
    }
    return best;
}

} // namespace mgtest

#endif

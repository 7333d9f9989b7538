#include "mgsched/milp/model.hpp"

#include <algorithm>

namespace mgsched::milp {

int MilpModel::add_var(std::string vname, double lb, double ub, bool integral) {
    if (!(lb <= ub))
        throw Error("variable " + vname + ": lb > ub");
    vars.push_back(Variable{std::move(vname), lb, ub, integral});
    return static_cast<int>(vars.size()) - 1;
}

int MilpModel::add_row(std::string rname, std::vector<std::pair<int, double>> coeffs, Rel rel, double rhs) {
    for (const auto& [j, a] : coeffs) {
        if (j < 0 || j >= n_vars())
            throw Error("row " + rname + ": coefficient references unknown variable");
        (void)a;
    }
    rows.push_back(Constraint{std::move(rname), std::move(coeffs), rel, rhs});
    return static_cast<int>(rows.size()) - 1;
}

int MilpModel::n_integer() const {
    return static_cast<int>(std::count_if(vars.begin(), vars.end(),
                                          [](const Variable& v) { return v.integral; }));
}

double MilpModel::eval_objective(std::span<const double> x) const {
    double v = obj_constant;
    for (const auto& [j, a] : objective) v += a * x[j];
    return v;
}

double MilpModel::eval_row(std::span<const double> x, const Constraint& c) const {
    double v = 0.0;
    for (const auto& [j, a] : c.coeffs) v += a * x[j];
    return v;
}

double MilpModel::max_infeasibility(std::span<const double> x) const {
    double worst = 0.0;
    for (const auto& c : rows) {
        const double v = eval_row(x, c);
        double viol = 0.0;
        switch (c.rel) {
        case Rel::Le: viol = v - c.rhs; break;
        case Rel::Ge: viol = c.rhs - v; break;
        case Rel::Eq: viol = std::abs(v - c.rhs); break;
        }
        worst = std::max(worst, viol);
    }
    for (int j = 0; j < n_vars(); ++j) {
        worst = std::max(worst, vars[j].lb - x[j]);
        worst = std::max(worst, x[j] - vars[j].ub);
    }
    return worst;
}

void MilpModel::validate() const {
    for (const auto& v : vars) {
        if (!(v.lb <= v.ub)) throw Error("variable " + v.name + ": lb > ub");
        if (std::isnan(v.lb) || std::isnan(v.ub)) throw Error("variable " + v.name + ": NaN bound");
    }
    for (const auto& c : rows) {
        if (std::isnan(c.rhs) || std::isinf(c.rhs)) throw Error("row " + c.name + ": bad rhs");
        for (const auto& [j, a] : c.coeffs) {
            if (j < 0 || j >= n_vars()) throw Error("row " + c.name + ": bad variable index");
            if (!std::isfinite(a)) throw Error("row " + c.name + ": non-finite coefficient");
        }
    }
    for (const auto& [j, a] : objective) {
        if (j < 0 || j >= n_vars()) throw Error("objective: bad variable index");
        if (!std::isfinite(a)) throw Error("objective: non-finite coefficient");
    }
}

std::string to_string(SolStatus s) {
    switch (s) {
    case SolStatus::Optimal: return "optimal";
    case SolStatus::Infeasible: return "infeasible";
    case SolStatus::Unbounded: return "unbounded";
    case SolStatus::GapLimit: return "gap_limit";
    case SolStatus::NodeLimit: return "node_limit";
    case SolStatus::TimeLimit: return "time_limit";
    }
    return "unknown";
}

} // namespace mgsched::milp

#ifndef MGSCHED_MILP_MODEL_HPP
#define MGSCHED_MILP_MODEL_HPP

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mgsched/common.hpp"

namespace mgsched::milp {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Rel { Le, Eq, Ge };
enum class Sense { Max, Min };

struct Variable {
    std::string name;
    double lb = 0.0;
    double ub = kInf;
    bool integral = false;
};

struct Constraint {
    std::string name;
    std::vector<std::pair<int, double>> coeffs; // (variable index, coefficient)
    Rel rel = Rel::Le;
    double rhs = 0.0;
};

// Language-neutral variable/constraint/objective container.
struct MilpModel {
    std::string name = "model";
    Sense sense = Sense::Max;
    std::vector<Variable> vars;
    std::vector<Constraint> rows;
    std::vector<std::pair<int, double>> objective; // sparse
    double obj_constant = 0.0;
    // Finite big-M values with provenance, e.g. ("risk_M_s1 = 2*(ub+|target|)", 1643.2).
    std::vector<std::pair<std::string, double>> big_m_registry;

    int add_var(std::string name, double lb, double ub, bool integral = false);
    int add_row(std::string name, std::vector<std::pair<int, double>> coeffs, Rel rel, double rhs);

    int n_vars() const { return static_cast<int>(vars.size()); }
    int n_rows() const { return static_cast<int>(rows.size()); }
    int n_integer() const;

    double eval_objective(std::span<const double> x) const;
    double eval_row(std::span<const double> x, const Constraint& c) const;
    // Max constraint violation and max bound violation at x.
    double max_infeasibility(std::span<const double> x) const;

    void validate() const; // throws Error on inconsistent bounds / bad indices
};

enum class SolStatus { Optimal, Infeasible, Unbounded, GapLimit, NodeLimit, TimeLimit };

std::string to_string(SolStatus s);

struct Solution {
    SolStatus status = SolStatus::Infeasible;
    double objective = std::nan("");
    std::vector<double> x;
    double bound = std::nan(""); // best dual bound, in the model's sense
    double gap = std::nan("");   // relative gap
    long nodes = 0;
    double wall_sec = 0.0;
};

struct SolveOptions {
    double int_tol = 1e-6;
    double rel_gap = 1e-6;
    double abs_gap = 1e-9;
    long node_limit = -1;        // < 0: unlimited
    double time_limit_sec = -1;  // < 0: unlimited
    enum class Branching { MostFractional } branching = Branching::MostFractional;
    enum class NodeSelect { BestBound } node_select = NodeSelect::BestBound;
    bool deterministic = true;   // single-threaded tree, ties broken by index
};

} // namespace mgsched::milp

#endif

#include "mgsched/milp/branch_bound.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <queue>

namespace mgsched::milp {

namespace {

struct BoundChange {
    int var;
    double lb, ub;
    std::shared_ptr<const BoundChange> parent;
};

struct Node {
    double parent_bound; // LP bound inherited from the parent, model sense
    long id;
    std::shared_ptr<const BoundChange> chain;
};

// Best bound first; ties by node id so two runs process nodes identically.
struct NodeOrder {
    bool maximize;
    bool operator()(const Node& a, const Node& b) const {
        const double ka = maximize ? a.parent_bound : -a.parent_bound;
        const double kb = maximize ? b.parent_bound : -b.parent_bound;
        if (ka != kb) return ka < kb; // priority_queue: top = "largest"
        return a.id > b.id;
    }
};

} // namespace

Solution branch_and_bound(const MilpModel& model, const SolveOptions& opts) {
    model.validate();
    const bool maximize = model.sense == Sense::Max;
    const double better = maximize ? 1.0 : -1.0;
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    std::vector<int> int_vars;
    for (int j = 0; j < model.n_vars(); ++j) {
        if (!model.vars[j].integral) continue;
        if (!(model.vars[j].lb > -kInf) || !(model.vars[j].ub < kInf))
            throw Error("branch_and_bound: integer variable " + model.vars[j].name + " is unbounded");
        int_vars.push_back(j);
    }

    std::vector<double> base_lb(model.n_vars()), base_ub(model.n_vars());
    for (int j = 0; j < model.n_vars(); ++j) {
        base_lb[j] = model.vars[j].lb;
        base_ub[j] = model.vars[j].ub;
    }

    LpOptions lp_opts;
    if (opts.time_limit_sec > 0) lp_opts.deadline_sec = opts.time_limit_sec;

    Solution res;
    res.nodes = 0;
    bool have_incumbent = false;
    double incumbent = maximize ? -kInf : kInf;
    std::vector<double> incumbent_x;

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open(NodeOrder{maximize});
    long next_id = 0;
    open.push(Node{maximize ? kInf : -kInf, next_id++, nullptr});

    auto gap_slack = [&](double inc) {
        return std::max(opts.abs_gap, opts.rel_gap * std::max(1.0, std::abs(inc)));
    };
    auto frac_of = [&](double v) {
        const double f = v - std::floor(v);
        return std::min(f, 1.0 - f);
    };

    std::vector<double> lb(base_lb), ub(base_ub);
    SolStatus stop_status = SolStatus::Optimal;
    double best_open_bound = maximize ? -kInf : kInf;

    while (!open.empty()) {
        // Global dual bound over the open list (best-bound order makes the
        // top's bound the extreme one).
        best_open_bound = open.top().parent_bound;
        if (have_incumbent) {
            const double slack = gap_slack(incumbent);
            if (maximize ? best_open_bound <= incumbent + slack
                         : best_open_bound >= incumbent - slack)
                break; // everything remaining is fathomed
        }
        if (opts.node_limit >= 0 && res.nodes >= opts.node_limit) {
            stop_status = SolStatus::NodeLimit;
            break;
        }
        if (opts.time_limit_sec > 0 && elapsed() > opts.time_limit_sec) {
            stop_status = SolStatus::TimeLimit;
            break;
        }

        const Node node = open.top();
        open.pop();

        // Materialize this node's bounds.
        lb = base_lb;
        ub = base_ub;
        for (auto c = node.chain.get(); c != nullptr; c = c->parent.get()) {
            lb[c->var] = std::max(lb[c->var], c->lb);
            ub[c->var] = std::min(ub[c->var], c->ub);
        }

        ++res.nodes;
        LpResult rel;
        if (opts.time_limit_sec > 0) lp_opts.deadline_sec = opts.time_limit_sec - elapsed();
        try {
            rel = solve_lp_with_bounds(model, lb, ub, lp_opts);
        } catch (const SolveError&) {
            if (opts.time_limit_sec > 0 && elapsed() > opts.time_limit_sec) {
                stop_status = SolStatus::TimeLimit;
                break;
            }
            throw;
        }
        if (rel.status == SolStatus::Infeasible) continue;
        if (rel.status == SolStatus::Unbounded) {
            if (node.chain == nullptr) {
                res.status = SolStatus::Unbounded;
                res.wall_sec = elapsed();
                return res;
            }
            throw SolveError("branch_and_bound: unbounded node below a bounded root");
        }

        const double node_bound = rel.objective;
        if (have_incumbent) {
            const double slack = gap_slack(incumbent);
            if (maximize ? node_bound <= incumbent + slack : node_bound >= incumbent - slack)
                continue;
        }

        // Find the most fractional integer variable.
        int branch_var = -1;
        double branch_frac = opts.int_tol;
        double branch_val = 0.0;
        for (int j : int_vars) {
            const double f = frac_of(rel.x[j]);
            if (f > branch_frac + 1e-15) {
                branch_frac = f;
                branch_var = j;
                branch_val = rel.x[j];
            }
        }

        if (branch_var < 0) {
            // Integral within tolerance.  If any value is off-exact, re-solve
            // with the integers fixed so the incumbent is an exact vertex.
            std::vector<double> cand_x = rel.x;
            double cand_obj = rel.objective;
            double worst = 0.0;
            for (int j : int_vars) worst = std::max(worst, frac_of(rel.x[j]));
            if (worst > 1e-12) {
                std::vector<double> flb(lb), fub(ub);
                for (int j : int_vars) {
                    const double r = std::round(rel.x[j]);
                    flb[j] = r;
                    fub[j] = r;
                }
                try {
                    LpResult fixed = solve_lp_with_bounds(model, flb, fub, lp_opts);
                    if (fixed.status == SolStatus::Optimal) {
                        cand_x = fixed.x;
                        cand_obj = fixed.objective;
                    }
                } catch (const SolveError&) {
                    // keep the tolerance-integral point
                }
            } else {
                for (int j : int_vars) cand_x[j] = std::round(cand_x[j]);
            }
            if (!have_incumbent || better * cand_obj > better * incumbent) {
                have_incumbent = true;
                incumbent = cand_obj;
                incumbent_x = cand_x;
            }
            continue;
        }

        // Children: floor side first, then ceil side.
        auto down = std::make_shared<BoundChange>(
            BoundChange{branch_var, lb[branch_var], std::floor(branch_val), node.chain});
        auto up = std::make_shared<BoundChange>(
            BoundChange{branch_var, std::ceil(branch_val), ub[branch_var], node.chain});
        open.push(Node{node_bound, next_id++, std::move(down)});
        open.push(Node{node_bound, next_id++, std::move(up)});
    }

    res.wall_sec = elapsed();
    if (!have_incumbent) {
        if (stop_status == SolStatus::Optimal) {
            res.status = SolStatus::Infeasible;
        } else {
            res.status = stop_status;
            res.bound = open.empty() ? (maximize ? -kInf : kInf) : open.top().parent_bound;
            res.gap = kInf;
        }
        return res;
    }

    res.objective = incumbent;
    res.x = std::move(incumbent_x);
    if (stop_status == SolStatus::Optimal && open.empty()) {
        res.bound = incumbent;
        res.gap = 0.0;
        res.status = SolStatus::Optimal;
    } else if (stop_status == SolStatus::Optimal) {
        // Fathomed: everything left is at or below the incumbent plus the gap
        // slack, so the incumbent is optimal within tolerance.
        res.bound = maximize ? std::max(incumbent, best_open_bound)
                             : std::min(incumbent, best_open_bound);
        res.gap = std::abs(res.bound - incumbent) / std::max(1.0, std::abs(incumbent));
        res.status = SolStatus::Optimal;
    } else {
        res.bound = open.empty() ? incumbent : open.top().parent_bound;
        res.gap = std::abs(res.bound - incumbent) / std::max(1.0, std::abs(incumbent));
        res.status = stop_status;
    }
    return res;
}

} // namespace mgsched::milp

#include "mgsched/milp/simplex.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <vector>

namespace mgsched::milp {

namespace {

enum class VState : unsigned char { Basic, AtLo, AtHi, FreeZero };

struct SparseCol {
    std::vector<std::pair<int, double>> entries; // (row, coefficient)
};

class Simplex {
public:
    Simplex(const MilpModel& model, std::span<const double> lb, std::span<const double> ub,
            const LpOptions& opts)
        : model_(model), opts_(opts), t_start_(std::chrono::steady_clock::now()) {
        n_struct_ = model.n_vars();
        m_ = model.n_rows();
        n_ = n_struct_ + m_; // structurals + slacks; artificials appended later

        cols_.resize(n_);
        for (int i = 0; i < m_; ++i)
            for (const auto& [j, a] : model.rows[i].coeffs)
                if (a != 0.0) cols_[j].entries.emplace_back(i, a);
        // Merge duplicate references to the same row within a column.
        for (auto& col : cols_) {
            auto& e = col.entries;
            std::sort(e.begin(), e.end(),
                      [](const auto& x, const auto& y) { return x.first < y.first; });
            size_t w = 0;
            for (size_t r = 0; r < e.size(); ++r) {
                if (w > 0 && e[w - 1].first == e[r].first) e[w - 1].second += e[r].second;
                else e[w++] = e[r];
            }
            e.resize(w);
            e.erase(std::remove_if(e.begin(), e.end(),
                                   [](const auto& x) { return x.second == 0.0; }),
                    e.end());
        }
        for (int i = 0; i < m_; ++i)
            cols_[n_struct_ + i].entries.emplace_back(i, 1.0);

        lo_.assign(n_, 0.0);
        hi_.assign(n_, kInf);
        for (int j = 0; j < n_struct_; ++j) {
            lo_[j] = lb[j];
            hi_[j] = ub[j];
            if (!(lo_[j] <= hi_[j])) {
                trivially_infeasible_ = true; // empty box
                return;
            }
        }
        b_.resize(m_);
        bscale_ = 1.0;
        for (int i = 0; i < m_; ++i) {
            b_[i] = model.rows[i].rhs;
            bscale_ = std::max(bscale_, std::abs(b_[i]));
            const int s = n_struct_ + i;
            switch (model.rows[i].rel) {
            case Rel::Le: lo_[s] = 0.0; hi_[s] = kInf; break;
            case Rel::Ge: lo_[s] = -kInf; hi_[s] = 0.0; break;
            case Rel::Eq: lo_[s] = 0.0; hi_[s] = 0.0; break;
            }
        }

        // Phase-2 cost, internally minimized.
        sense_sign_ = model.sense == Sense::Max ? -1.0 : 1.0;
        cost_.assign(n_, 0.0);
        for (const auto& [j, a] : model.objective) cost_[j] += sense_sign_ * a;

        obj_scale_ = 1.0;
        for (const auto& [j, a] : model.objective) obj_scale_ = std::max(obj_scale_, std::abs(a));
    }

    LpResult run() {
        LpResult res;
        if (trivially_infeasible_) {
            res.status = SolStatus::Infeasible;
            return res;
        }
        init_basis();

        if (n_art_ > 0) {
            phase_ = 1;
            const SolStatus st = iterate();
            if (st != SolStatus::Optimal)
                throw SolveError("simplex: phase 1 reported " + to_string(st));
            refactor();
            compute_basic_values();
            double infeas = phase1_objective();
            if (infeas > 1e-9 * (1.0 + bscale_) && infeas < 1e-5 * (1.0 + bscale_)) {
                // Ambiguous band: polish with Bland and a tighter tolerance
                // before calling the model infeasible.
                bland_ = true;
                const double saved = opts_.opt_tol;
                opts_.opt_tol = saved * 1e-2;
                iterate();
                opts_.opt_tol = saved;
                bland_ = false;
                refactor();
                compute_basic_values();
                infeas = phase1_objective();
            }
            if (infeas > 1e-9 * (1.0 + bscale_)) {
                res.status = SolStatus::Infeasible;
                res.iterations = iters_;
                return res;
            }
            seal_artificials();
        }

        phase_ = 2;
        const SolStatus st = iterate();
        res.iterations = iters_;
        if (st == SolStatus::Unbounded) {
            res.status = SolStatus::Unbounded;
            return res;
        }
        if (st != SolStatus::Optimal)
            throw SolveError("simplex: phase 2 reported " + to_string(st));

        // Certificate: refactor, recheck primal and dual feasibility.
        for (int attempt = 0;; ++attempt) {
            refactor();
            compute_basic_values();
            price();
            const double dual_bad = worst_dual_violation();
            if (dual_bad > opts_.opt_tol) {
                if (attempt >= 4)
                    throw SolveError("simplex: certificate failed, dual residual "
                                     + std::to_string(dual_bad));
                const SolStatus st2 = iterate(); // keep going from the refreshed basis
                if (st2 == SolStatus::Unbounded) {
                    res.status = SolStatus::Unbounded;
                    res.iterations = iters_;
                    return res;
                }
                continue;
            }
            break;
        }
        extract(res);
        if (res.primal_residual > opts_.feas_tol * (1.0 + bscale_)) {
            std::ostringstream os;
            os << "simplex: primal residual " << res.primal_residual << " exceeds tolerance (bscale "
               << bscale_ << ", m=" << m_ << ", n=" << n_ << ")";
            throw SolveError(os.str());
        }
        res.status = SolStatus::Optimal;
        res.iterations = iters_;
        return res;
    }

private:
    const MilpModel& model_;
    LpOptions opts_;
    std::chrono::steady_clock::time_point t_start_;

    int n_struct_ = 0, m_ = 0, n_ = 0, n_art_ = 0;
    bool trivially_infeasible_ = false;
    double sense_sign_ = 1.0, bscale_ = 1.0, obj_scale_ = 1.0;
    int phase_ = 2;

    std::vector<SparseCol> cols_;
    std::vector<double> lo_, hi_, b_, cost_, art_cost_;
    std::vector<int> basis_;          // size m_: variable index per row position
    std::vector<int> basic_pos_;      // size n: position in basis or -1
    std::vector<VState> state_;
    std::vector<double> xb_;          // basic values by position
    std::vector<double> binv_;        // dense m x m, row-major
    std::vector<double> y_;           // duals of the internal min problem
    long iters_ = 0;
    long degen_streak_ = 0;
    bool bland_ = false;

    double& binv(int r, int c) { return binv_[static_cast<size_t>(r) * m_ + c]; }
    double binv_c(int r, int c) const { return binv_[static_cast<size_t>(r) * m_ + c]; }

    double nb_value(int j) const {
        switch (state_[j]) {
        case VState::AtLo: return lo_[j];
        case VState::AtHi: return hi_[j];
        case VState::FreeZero: return 0.0;
        case VState::Basic: break;
        }
        return xb_[basic_pos_[j]];
    }

    double cur_cost(int j) const {
        if (phase_ == 1) return j >= n_struct_ + m_ ? 1.0 : 0.0;
        return cost_[j];
    }

    void init_basis() {
        state_.assign(n_, VState::AtLo);
        for (int j = 0; j < n_; ++j) {
            if (lo_[j] > -kInf) state_[j] = VState::AtLo;
            else if (hi_[j] < kInf) state_[j] = VState::AtHi;
            else state_[j] = VState::FreeZero;
        }
        // Wanted slack values given the nonbasic structural placement.
        std::vector<double> r(b_);
        for (int j = 0; j < n_struct_; ++j) {
            const double v = state_[j] == VState::AtLo ? lo_[j]
                           : state_[j] == VState::AtHi ? hi_[j] : 0.0;
            if (v != 0.0)
                for (const auto& [i, a] : cols_[j].entries) r[i] -= a * v;
        }
        basis_.assign(m_, -1);
        std::vector<double> art_sign(m_, 0.0);
        xb_.assign(m_, 0.0);
        for (int i = 0; i < m_; ++i) {
            const int s = n_struct_ + i;
            if (r[i] >= lo_[s] && r[i] <= hi_[s]) {
                basis_[i] = s;
                state_[s] = VState::Basic;
                xb_[i] = r[i];
            } else {
                const double clamped = std::clamp(r[i], lo_[s], hi_[s]);
                state_[s] = clamped == lo_[s] ? VState::AtLo : VState::AtHi;
                art_sign[i] = r[i] > clamped ? 1.0 : -1.0;
                xb_[i] = std::abs(r[i] - clamped);
            }
        }
        // Append artificial columns where the slack basis is bound-infeasible.
        for (int i = 0; i < m_; ++i) {
            if (art_sign[i] == 0.0) continue;
            SparseCol c;
            c.entries.emplace_back(i, art_sign[i]);
            cols_.push_back(std::move(c));
            lo_.push_back(0.0);
            hi_.push_back(kInf);
            cost_.push_back(0.0);
            state_.push_back(VState::Basic);
            basis_[i] = n_;
            ++n_;
            ++n_art_;
        }
        basic_pos_.assign(n_, -1);
        for (int i = 0; i < m_; ++i) basic_pos_[basis_[i]] = i;
        refactor();
        compute_basic_values();
    }

    void refactor() {
        // Invert the basis matrix with Gauss-Jordan, partial pivoting.
        std::vector<double> B(static_cast<size_t>(m_) * m_, 0.0);
        for (int p = 0; p < m_; ++p)
            for (const auto& [i, a] : cols_[basis_[p]].entries)
                B[static_cast<size_t>(i) * m_ + p] = a;
        binv_.assign(static_cast<size_t>(m_) * m_, 0.0);
        for (int i = 0; i < m_; ++i) binv(i, i) = 1.0;
        for (int c = 0; c < m_; ++c) {
            int piv = -1;
            double best = 0.0;
            for (int r = c; r < m_; ++r) {
                const double v = std::abs(B[static_cast<size_t>(r) * m_ + c]);
                if (v > best) { best = v; piv = r; }
            }
            if (piv < 0 || best < 1e-13)
                throw SolveError("simplex: singular basis during refactorization");
            if (piv != c) {
                for (int k = 0; k < m_; ++k) {
                    std::swap(B[static_cast<size_t>(piv) * m_ + k], B[static_cast<size_t>(c) * m_ + k]);
                    std::swap(binv(piv, k), binv(c, k));
                }
            }
            const double d = 1.0 / B[static_cast<size_t>(c) * m_ + c];
            for (int k = 0; k < m_; ++k) {
                B[static_cast<size_t>(c) * m_ + k] *= d;
                binv(c, k) *= d;
            }
            for (int r = 0; r < m_; ++r) {
                if (r == c) continue;
                const double f = B[static_cast<size_t>(r) * m_ + c];
                if (f == 0.0) continue;
                for (int k = 0; k < m_; ++k) {
                    B[static_cast<size_t>(r) * m_ + k] -= f * B[static_cast<size_t>(c) * m_ + k];
                    binv(r, k) -= f * binv(c, k);
                }
            }
        }
    }

    void compute_basic_values() {
        std::vector<double> rhs(b_);
        for (int j = 0; j < n_; ++j) {
            if (state_[j] == VState::Basic) continue;
            const double v = nb_value(j);
            if (v == 0.0) continue;
            for (const auto& [i, a] : cols_[j].entries) rhs[i] -= a * v;
        }
        xb_.assign(m_, 0.0);
        for (int r = 0; r < m_; ++r) {
            double acc = 0.0;
            for (int k = 0; k < m_; ++k) acc += binv_c(r, k) * rhs[k];
            xb_[r] = acc;
        }
    }

    void price() {
        y_.assign(m_, 0.0);
        for (int p = 0; p < m_; ++p) {
            const double cb = cur_cost(basis_[p]);
            if (cb == 0.0) continue;
            for (int k = 0; k < m_; ++k) y_[k] += cb * binv_c(p, k);
        }
    }

    double reduced_cost(int j) const {
        double d = cur_cost(j);
        for (const auto& [i, a] : cols_[j].entries) d -= y_[i] * a;
        return d;
    }

    double phase1_objective() const {
        double v = 0.0;
        for (int j = n_struct_ + m_; j < n_; ++j)
            v += state_[j] == VState::Basic ? xb_[basic_pos_[j]] : nb_value(j);
        return v;
    }

    void seal_artificials() {
        for (int j = n_struct_ + m_; j < n_; ++j) {
            hi_[j] = 0.0;
            if (state_[j] != VState::Basic) state_[j] = VState::AtLo;
            else if (std::abs(xb_[basic_pos_[j]]) < 1e-9) xb_[basic_pos_[j]] = 0.0;
        }
    }

    double worst_dual_violation() /*requires fresh y_*/ {
        const double scale = std::max(1.0, phase_ == 1 ? 1.0 : obj_scale_);
        double worst = 0.0;
        for (int j = 0; j < n_; ++j) {
            if (state_[j] == VState::Basic) continue;
            if (lo_[j] == hi_[j]) continue; // fixed: any sign is fine
            const double d = reduced_cost(j);
            switch (state_[j]) {
            case VState::AtLo: worst = std::max(worst, -d / scale); break;
            case VState::AtHi: worst = std::max(worst, d / scale); break;
            case VState::FreeZero: worst = std::max(worst, std::abs(d) / scale); break;
            case VState::Basic: break;
            }
        }
        return worst;
    }

    bool deadline_hit() const {
        if (opts_.deadline_sec < 0.0) return false;
        const auto dt = std::chrono::steady_clock::now() - t_start_;
        return std::chrono::duration<double>(dt).count() > opts_.deadline_sec;
    }

    SolStatus iterate() {
        const long limit = opts_.iter_limit > 0 ? opts_.iter_limit
                                                : std::max<long>(50000, 100L * (m_ + n_));
        const long refactor_period = 200;
        long since_refactor = 0;
        for (long it = 0; it < limit; ++it, ++iters_) {
            if ((it & 0xff) == 0 && deadline_hit())
                throw SolveError("simplex: deadline exceeded");
            if (since_refactor >= refactor_period) {
                refactor();
                compute_basic_values();
                since_refactor = 0;
            }
            price();

            // Entering variable.
            int enter = -1;
            double enter_dir = 0.0;
            double best_score = bland_ ? 0.0 : opts_.opt_tol;
            const double tol = opts_.opt_tol * std::max(1.0, phase_ == 1 ? 1.0 : obj_scale_);
            for (int j = 0; j < n_; ++j) {
                if (state_[j] == VState::Basic) continue;
                if (lo_[j] == hi_[j]) continue; // fixed variables never enter
                const double d = reduced_cost(j);
                double dir = 0.0;
                if ((state_[j] == VState::AtLo || state_[j] == VState::FreeZero) && d < -tol)
                    dir = 1.0;
                else if ((state_[j] == VState::AtHi || state_[j] == VState::FreeZero) && d > tol)
                    dir = -1.0;
                else
                    continue;
                if (bland_) { enter = j; enter_dir = dir; break; }
                const double score = std::abs(d);
                if (score > best_score) {
                    best_score = score;
                    enter = j;
                    enter_dir = dir;
                }
            }
            if (enter < 0) return SolStatus::Optimal;

            // Direction through the basis.
            std::vector<double> w(m_, 0.0);
            for (const auto& [i, a] : cols_[enter].entries)
                for (int r = 0; r < m_; ++r) w[r] += a * binv_c(r, i);

            // Ratio test.
            double t_own = hi_[enter] - lo_[enter]; // inf when either bound missing
            double t_min = t_own;
            int leave_pos = -1;   // -1: own bound flip
            double leave_to = 0.0; // bound the leaving variable hits
            double best_piv = 0.0;
            for (int p = 0; p < m_; ++p) {
                const double delta = -enter_dir * w[p]; // d(xb[p]) / dt
                if (std::abs(delta) <= opts_.pivot_tol) continue;
                const int bj = basis_[p];
                double tp, to;
                if (delta > 0.0) {
                    if (hi_[bj] >= kInf) continue;
                    tp = (hi_[bj] - xb_[p]) / delta;
                    to = hi_[bj];
                } else {
                    if (lo_[bj] <= -kInf) continue;
                    tp = (xb_[p] - lo_[bj]) / (-delta);
                    to = lo_[bj];
                }
                if (tp < 0.0) tp = 0.0;
                const bool better = tp < t_min - 1e-10 * (1.0 + std::abs(t_min));
                const bool tie = !better && tp <= t_min + 1e-10 * (1.0 + std::abs(t_min));
                if (better || (tie && (leave_pos < 0 ? tp < t_min
                                                     : (bland_ ? basis_[p] < basis_[leave_pos]
                                                               : std::abs(w[p]) > best_piv)))) {
                    t_min = std::min(t_min, tp);
                    leave_pos = p;
                    leave_to = to;
                    best_piv = std::abs(w[p]);
                }
            }

            if (t_min >= kInf) {
                if (phase_ == 1)
                    throw SolveError("simplex: unbounded phase-1 direction");
                return SolStatus::Unbounded;
            }

            degen_streak_ = t_min > 1e-11 ? 0 : degen_streak_ + 1;
            if (degen_streak_ > 500 + m_) bland_ = true;
            else if (degen_streak_ == 0) bland_ = false;

            if (leave_pos < 0 || (t_own < kInf && t_own <= t_min)) {
                // Bound flip, no basis change.
                const double t = t_own;
                for (int p = 0; p < m_; ++p) xb_[p] -= enter_dir * t * w[p];
                state_[enter] = state_[enter] == VState::AtLo ? VState::AtHi : VState::AtLo;
                continue;
            }

            // Pivot.
            const double t = t_min;
            const double enter_val = nb_value(enter) + enter_dir * t;
            for (int p = 0; p < m_; ++p) xb_[p] -= enter_dir * t * w[p];
            const int leave = basis_[leave_pos];
            state_[leave] = leave_to == lo_[leave] ? VState::AtLo : VState::AtHi;
            basic_pos_[leave] = -1;
            basis_[leave_pos] = enter;
            basic_pos_[enter] = leave_pos;
            state_[enter] = VState::Basic;
            xb_[leave_pos] = enter_val;

            const double piv = w[leave_pos];
            if (std::abs(piv) < 1e-13)
                throw SolveError("simplex: vanishing pivot element");
            const double inv_piv = 1.0 / piv;
            double* row_r = &binv_[static_cast<size_t>(leave_pos) * m_];
            for (int k = 0; k < m_; ++k) row_r[k] *= inv_piv;
            for (int p = 0; p < m_; ++p) {
                if (p == leave_pos) continue;
                const double f = w[p];
                if (f == 0.0) continue;
                double* row_p = &binv_[static_cast<size_t>(p) * m_];
                for (int k = 0; k < m_; ++k) row_p[k] -= f * row_r[k];
            }
            ++since_refactor;
        }
        throw SolveError("simplex: iteration limit reached (m=" + std::to_string(m_)
                         + ", n=" + std::to_string(n_) + ")");
    }

    void extract(LpResult& res) {
        res.x.assign(n_struct_, 0.0);
        for (int j = 0; j < n_struct_; ++j) {
            double v = state_[j] == VState::Basic ? xb_[basic_pos_[j]] : nb_value(j);
            // Clean tolerance dust against the variable's own box.
            if (lo_[j] > -kInf) v = std::max(v, lo_[j]);
            if (hi_[j] < kInf) v = std::min(v, hi_[j]);
            res.x[j] = v;
        }
        res.objective = model_.eval_objective(res.x);
        res.duals.assign(m_, 0.0);
        res.reduced_costs.assign(n_struct_, 0.0);
        price();
        for (int i = 0; i < m_; ++i) res.duals[i] = sense_sign_ * y_[i];
        for (int j = 0; j < n_struct_; ++j) res.reduced_costs[j] = sense_sign_ * reduced_cost(j);
        res.primal_residual = model_.max_infeasibility(res.x);
        res.dual_residual = worst_dual_violation();
    }
};

} // namespace

LpResult solve_lp_with_bounds(const MilpModel& model, std::span<const double> lb,
                              std::span<const double> ub, const LpOptions& opts) {
    model.validate();
    Simplex s(model, lb, ub, opts);
    return s.run();
}

LpResult solve_lp(const MilpModel& model, const LpOptions& opts) {
    std::vector<double> lb(model.n_vars()), ub(model.n_vars());
    for (int j = 0; j < model.n_vars(); ++j) {
        lb[j] = model.vars[j].lb;
        ub[j] = model.vars[j].ub;
    }
    return solve_lp_with_bounds(model, lb, ub, opts);
}

} // namespace mgsched::milp

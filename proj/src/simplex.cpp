#include "shipsched/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shipsched {

namespace {

enum class State : unsigned char { Basic, AtLower, AtUpper };

struct SingularBasis : std::runtime_error {
    SingularBasis() : std::runtime_error("singular basis") {}
};

class Simplex {
public:
    Simplex(const LpProblem& lp, const LpOptions& opt) : lp_(lp), opt_(opt) {
        m_ = static_cast<int>(lp.rows.size());
        n_ = lp.n;
        build_columns();
    }

    LpResult run() {
        // Numerical trouble restarts the whole solve from a scratch basis
        // with conservative pivoting.
        try {
            return run_once(false);
        } catch (const SingularBasis&) {
        }
        try {
            total_ = n_ + m_;
            cols_.resize(total_);
            lo_.resize(total_);
            hi_.resize(total_);
            return run_once(true);
        } catch (const SingularBasis&) {
            LpResult res;
            res.status = LpStatus::Singular;
            return res;
        }
    }

private:
    LpResult run_once(bool conservative) {
        conservative_ = conservative;
        LpResult res;
        if (m_ == 0) {
            // Nothing but bounds: park every variable at its cheapest bound.
            res.x.resize(n_);
            for (int j = 0; j < n_; ++j) {
                if (lp_.cost[j] > 0 || !std::isfinite(lp_.hi[j]))
                    res.x[j] = lp_.lo[j];
                else
                    res.x[j] = lp_.cost[j] < 0 ? lp_.hi[j] : lp_.lo[j];
                res.value += lp_.cost[j] * res.x[j];
            }
            res.reduced = lp_.cost;
            res.status = LpStatus::Optimal;
            return res;
        }

        init_basis();

        // Phase 1: drive the artificials to zero.
        if (has_artificials_) {
            phase_cost_.assign(total_, 0.0);
            for (int j = art_begin_; j < total_; ++j) phase_cost_[j] = 1.0;
            LpStatus st = iterate(phase_cost_, res);
            if (st != LpStatus::Optimal) {
                res.status = st;
                return res;
            }
            double infeas = 0.0;
            for (int j = art_begin_; j < total_; ++j) infeas += value_[j];
            if (infeas > 1e-7 * (1.0 + std::fabs(rhs_norm_))) {
                res.status = LpStatus::Infeasible;
                finish(res);
                return res;
            }
            for (int j = art_begin_; j < total_; ++j) {
                lo_[j] = hi_[j] = 0.0;
                if (state_[j] != State::Basic) value_[j] = 0.0;
            }
        }

        phase_cost_.assign(total_, 0.0);
        for (int j = 0; j < n_; ++j) phase_cost_[j] = lp_.cost[j];
        LpStatus st = iterate(phase_cost_, res);
        res.status = st;
        finish(res);
        return res;
    }

    void build_columns() {
        total_ = n_ + m_;
        cols_.resize(total_);
        lo_.resize(total_);
        hi_.resize(total_);
        for (int j = 0; j < n_; ++j) {
            if (!std::isfinite(lp_.lo[j]))
                throw std::invalid_argument("simplex needs finite lower bounds");
            lo_[j] = lp_.lo[j];
            hi_[j] = lp_.hi[j];
        }
        for (const auto& row : lp_.rows) rhs_norm_ = std::max(rhs_norm_, std::fabs(row.rhs));
        for (int i = 0; i < m_; ++i) {
            for (const auto& [j, a] : lp_.rows[i].terms)
                if (a != 0.0) cols_[j].push_back({i, a});
            int s = n_ + i;
            cols_[s] = {{i, 1.0}};
            lo_[s] = 0.0;
            hi_[s] = lp_.rows[i].eq ? 0.0 : kInf;
        }
    }

    void init_basis() {
        value_.assign(total_, 0.0);
        state_.assign(total_, State::AtLower);
        for (int j = 0; j < n_; ++j) {
            // Start at the finite bound nearest zero.
            if (std::isfinite(hi_[j]) && std::fabs(hi_[j]) < std::fabs(lo_[j])) {
                state_[j] = State::AtUpper;
                value_[j] = hi_[j];
            } else {
                value_[j] = lo_[j];
            }
        }

        std::vector<double> residual(m_);
        for (int i = 0; i < m_; ++i) residual[i] = lp_.rows[i].rhs;
        for (int j = 0; j < n_; ++j)
            if (value_[j] != 0.0)
                for (const auto& [i, a] : cols_[j]) residual[i] -= a * value_[j];

        basic_.assign(m_, -1);
        art_begin_ = total_;
        has_artificials_ = false;
        std::vector<int> needs_artificial;
        for (int i = 0; i < m_; ++i) {
            int s = n_ + i;
            bool slack_ok = !lp_.rows[i].eq && residual[i] >= 0.0;
            if (slack_ok) {
                basic_[i] = s;
                state_[s] = State::Basic;
                value_[s] = residual[i];
            } else {
                needs_artificial.push_back(i);
            }
        }
        for (int i : needs_artificial) {
            double sign = residual[i] >= 0.0 ? 1.0 : -1.0;
            int a = total_++;
            cols_.push_back({{i, sign}});
            lo_.push_back(0.0);
            hi_.push_back(kInf);
            value_.push_back(residual[i] * sign);
            state_.push_back(State::Basic);
            basic_[i] = a;
            if (!has_artificials_) art_begin_ = a;
            has_artificials_ = true;
        }

        binv_.assign(static_cast<size_t>(m_) * m_, 0.0);
        for (int i = 0; i < m_; ++i) {
            double diag = cols_[basic_[i]][0].second;  // slack +1 or artificial sign
            binv_[static_cast<size_t>(i) * m_ + i] = 1.0 / diag;
        }
    }

    // One simplex run against the given cost vector. Returns Optimal when
    // no eligible entering column remains.
    LpStatus iterate(const std::vector<double>& cost, LpResult& res) {
        long max_iter = opt_.max_iterations > 0
                            ? opt_.max_iterations
                            : 50000L + 40L * (m_ + total_);
        long degenerate_run = 0;
        const long bland_after = 3L * (m_ + total_);
        std::vector<double> y(m_), alpha(m_);

        for (long iter = 0;; ++iter, ++res.iterations) {
            if (iter >= max_iter) return LpStatus::IterLimit;
            if (opt_.deadline && (iter & 255) == 0 &&
                std::chrono::steady_clock::now() > *opt_.deadline)
                return LpStatus::TimeLimit;

            btran(cost, y);

            bool bland = conservative_ || degenerate_run > bland_after;
            int enter = -1;
            double best = 0.0;
            int direction = 0;
            for (int j = 0; j < total_; ++j) {
                if (state_[j] == State::Basic) continue;
                if (hi_[j] - lo_[j] < opt_.pivot_tol) continue;  // fixed
                double d = cost[j];
                for (const auto& [i, a] : cols_[j]) d -= y[i] * a;
                double score = 0.0;
                int dir = 0;
                if (state_[j] == State::AtLower && d < -opt_.feas_tol) {
                    score = -d;
                    dir = +1;
                } else if (state_[j] == State::AtUpper && d > opt_.feas_tol) {
                    score = d;
                    dir = -1;
                }
                if (dir == 0) continue;
                if (bland) { enter = j; direction = dir; break; }
                if (score > best) {
                    best = score;
                    enter = j;
                    direction = dir;
                }
            }
            if (enter < 0) return LpStatus::Optimal;

            ftran(enter, alpha);
            const double min_pivot = conservative_ ? 1e-7 : opt_.pivot_tol;

            // Ratio test: first blocking basic bound or the entering
            // variable's own opposite bound (a bound flip, no pivot).
            double limit = std::isfinite(hi_[enter] - lo_[enter]) ? hi_[enter] - lo_[enter]
                                                                  : kInf;
            int leave_row = -1;
            double leave_bound = 0.0;
            for (int i = 0; i < m_; ++i) {
                double rate = direction * alpha[i];
                int b = basic_[i];
                double t, bound;
                if (rate > min_pivot) {  // basic moves toward its lower bound
                    t = (value_[b] - lo_[b]) / rate;
                    bound = lo_[b];
                } else if (rate < -min_pivot && std::isfinite(hi_[b])) {
                    t = (hi_[b] - value_[b]) / (-rate);
                    bound = hi_[b];
                } else {
                    continue;
                }
                t = std::max(t, 0.0);
                bool take;
                if (t < limit - 1e-12) {
                    take = true;
                } else if (t <= limit + 1e-12 && leave_row >= 0) {
                    // Tie break: Bland wants the smallest basic index,
                    // otherwise prefer the stabler (larger) pivot element.
                    take = bland ? basic_[i] < basic_[leave_row]
                                 : std::fabs(alpha[i]) > std::fabs(alpha[leave_row]);
                } else {
                    take = false;  // the bound flip wins exact ties
                }
                if (take) {
                    limit = std::min(limit, t);
                    leave_row = i;
                    leave_bound = bound;
                }
            }

            if (!std::isfinite(limit)) return LpStatus::IterLimit;  // unbounded: bounded models never hit this

            degenerate_run = limit <= 1e-11 ? degenerate_run + 1 : 0;

            // Apply the step.
            double step = direction * limit;
            for (int i = 0; i < m_; ++i)
                if (alpha[i] != 0.0) value_[basic_[i]] -= step * alpha[i];
            value_[enter] += step;

            if (leave_row < 0) {
                // Bound flip: the entering variable crosses to its other bound.
                state_[enter] = state_[enter] == State::AtLower ? State::AtUpper : State::AtLower;
                continue;
            }

            int leave = basic_[leave_row];
            value_[leave] = leave_bound;
            state_[leave] = std::fabs(leave_bound - lo_[leave]) <= std::fabs(leave_bound - hi_[leave])
                                ? State::AtLower
                                : State::AtUpper;
            state_[enter] = State::Basic;
            basic_[leave_row] = enter;
            double pivot_size = std::fabs(alpha[leave_row]);
            update_binv(leave_row, alpha);

            int refactor_every = conservative_ ? 64 : 128;
            if (++pivots_since_refactor_ >= refactor_every || pivot_size < 1e-6)
                refactorize();
        }
    }

    void btran(const std::vector<double>& cost, std::vector<double>& y) const {
        // y = c_B' B^-1
        for (int i = 0; i < m_; ++i) y[i] = 0.0;
        for (int k = 0; k < m_; ++k) {
            double cb = cost[basic_[k]];
            if (cb == 0.0) continue;
            const double* row = &binv_[static_cast<size_t>(k) * m_];
            for (int i = 0; i < m_; ++i) y[i] += cb * row[i];
        }
    }

    void ftran(int col, std::vector<double>& alpha) const {
        for (int i = 0; i < m_; ++i) alpha[i] = 0.0;
        for (const auto& [i, a] : cols_[col]) {
            for (int k = 0; k < m_; ++k)
                alpha[k] += binv_[static_cast<size_t>(k) * m_ + i] * a;
        }
    }

    void update_binv(int pivot_row, const std::vector<double>& alpha) {
        double piv = alpha[pivot_row];
        double* prow = &binv_[static_cast<size_t>(pivot_row) * m_];
        for (int i = 0; i < m_; ++i) prow[i] /= piv;
        for (int k = 0; k < m_; ++k) {
            if (k == pivot_row || alpha[k] == 0.0) continue;
            double f = alpha[k];
            double* krow = &binv_[static_cast<size_t>(k) * m_];
            for (int i = 0; i < m_; ++i) krow[i] -= f * prow[i];
        }
    }

    void refactorize() {
        pivots_since_refactor_ = 0;
        // Gauss-Jordan inversion of the basis matrix with partial pivoting.
        std::vector<double> dense(static_cast<size_t>(m_) * m_, 0.0);
        for (int k = 0; k < m_; ++k)
            for (const auto& [i, a] : cols_[basic_[k]])
                dense[static_cast<size_t>(i) * m_ + k] = a;
        std::vector<double> inv(static_cast<size_t>(m_) * m_, 0.0);
        for (int i = 0; i < m_; ++i) inv[static_cast<size_t>(i) * m_ + i] = 1.0;
        for (int col = 0; col < m_; ++col) {
            int piv = col;
            double best = std::fabs(dense[static_cast<size_t>(col) * m_ + col]);
            for (int r = col + 1; r < m_; ++r) {
                double v = std::fabs(dense[static_cast<size_t>(r) * m_ + col]);
                if (v > best) { best = v; piv = r; }
            }
            if (best < 1e-12) throw SingularBasis();
            if (piv != col) {
                for (int j = 0; j < m_; ++j) {
                    std::swap(dense[static_cast<size_t>(piv) * m_ + j],
                              dense[static_cast<size_t>(col) * m_ + j]);
                    std::swap(inv[static_cast<size_t>(piv) * m_ + j],
                              inv[static_cast<size_t>(col) * m_ + j]);
                }
            }
            double d = dense[static_cast<size_t>(col) * m_ + col];
            for (int j = 0; j < m_; ++j) {
                dense[static_cast<size_t>(col) * m_ + j] /= d;
                inv[static_cast<size_t>(col) * m_ + j] /= d;
            }
            for (int r = 0; r < m_; ++r) {
                if (r == col) continue;
                double f = dense[static_cast<size_t>(r) * m_ + col];
                if (f == 0.0) continue;
                for (int j = 0; j < m_; ++j) {
                    dense[static_cast<size_t>(r) * m_ + j] -=
                        f * dense[static_cast<size_t>(col) * m_ + j];
                    inv[static_cast<size_t>(r) * m_ + j] -=
                        f * inv[static_cast<size_t>(col) * m_ + j];
                }
            }
        }
        // Reorder: binv rows follow basic_ ordering (row k of B^-1 applies
        // to basic k); B column k is cols_[basic_[k]], so inv already maps.
        binv_ = std::move(inv);
        recompute_basics();
    }

    void recompute_basics() {
        std::vector<double> residual(m_);
        for (int i = 0; i < m_; ++i) residual[i] = lp_.rows[i].rhs;
        for (int j = 0; j < total_; ++j) {
            if (state_[j] == State::Basic) continue;
            if (value_[j] != 0.0)
                for (const auto& [i, a] : cols_[j]) residual[i] -= a * value_[j];
        }
        for (int k = 0; k < m_; ++k) {
            double v = 0.0;
            const double* row = &binv_[static_cast<size_t>(k) * m_];
            for (int i = 0; i < m_; ++i) v += row[i] * residual[i];
            value_[basic_[k]] = v;
        }
    }

    void finish(LpResult& res) {
        res.x.assign(n_, 0.0);
        for (int j = 0; j < n_; ++j) res.x[j] = value_[j];
        res.value = 0.0;
        for (int j = 0; j < n_; ++j) res.value += lp_.cost[j] * value_[j];
        res.dual.assign(m_, 0.0);
        std::vector<double> cost(total_, 0.0);
        for (int j = 0; j < n_; ++j) cost[j] = lp_.cost[j];
        btran(cost, res.dual);
        res.reduced.assign(n_, 0.0);
        for (int j = 0; j < n_; ++j) {
            double d = lp_.cost[j];
            for (const auto& [i, a] : cols_[j]) d -= res.dual[i] * a;
            res.reduced[j] = d;
        }
    }

    const LpProblem& lp_;
    LpOptions opt_;
    int m_ = 0, n_ = 0, total_ = 0;
    std::vector<std::vector<std::pair<int, double>>> cols_;
    std::vector<double> lo_, hi_, value_, phase_cost_;
    std::vector<State> state_;
    std::vector<int> basic_;
    std::vector<double> binv_;  // dense m x m row-major
    int art_begin_ = 0;
    bool conservative_ = false;
    bool has_artificials_ = false;
    double rhs_norm_ = 0.0;
    int pivots_since_refactor_ = 0;
};

}  // namespace

LpResult solve_lp(const LpProblem& lp, const LpOptions& options) {
    Simplex s(lp, options);
    return s.run();
}

}  // namespace shipsched

#include "shipsched/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <queue>
#include <stdexcept>

namespace shipsched {

namespace {

using Clock = std::chrono::steady_clock;

struct RelaxedLp {
    LpProblem lp;
    std::vector<bool> flipped;  // >= rows negated into <=
};

// Minimization form of the (max) model with the given working bounds.
RelaxedLp to_lp(const MilpModel& model, const std::vector<double>& lo,
                const std::vector<double>& hi) {
    RelaxedLp out;
    out.lp.n = static_cast<int>(model.vars.size());
    out.lp.cost.resize(out.lp.n);
    for (int j = 0; j < out.lp.n; ++j) out.lp.cost[j] = -model.obj[j];
    out.lp.lo = lo;
    out.lp.hi = hi;
    out.flipped.resize(model.rows.size(), false);
    for (size_t r = 0; r < model.rows.size(); ++r) {
        const LinRow& row = model.rows[r];
        LpProblem::Row lr;
        lr.eq = row.sense == RowSense::EQ;
        if (row.sense == RowSense::GE) {
            out.flipped[r] = true;
            lr.rhs = -row.rhs;
            for (const auto& [var, coef] : row.terms) lr.terms.push_back({var, -coef});
        } else {
            lr.rhs = row.rhs;
            lr.terms = row.terms;
        }
        out.lp.rows.push_back(std::move(lr));
    }
    return out;
}

std::vector<double> lower_bounds(const MilpModel& m) {
    std::vector<double> lo(m.vars.size());
    for (size_t j = 0; j < m.vars.size(); ++j) lo[j] = m.vars[j].lo;
    return lo;
}
std::vector<double> upper_bounds(const MilpModel& m) {
    std::vector<double> hi(m.vars.size());
    for (size_t j = 0; j < m.vars.size(); ++j) hi[j] = m.vars[j].hi;
    return hi;
}

void guard_size(const MilpModel& model, const SolverOptions& opt) {
    if (static_cast<int>(model.rows.size()) > opt.max_lp_rows)
        throw std::runtime_error(
            "model has " + std::to_string(model.rows.size()) +
            " rows, beyond the reference engine's dense kernel cap (" +
            std::to_string(opt.max_lp_rows) + "); export MPS and use an external solver");
}

// Zero-cost circulation cleanup: drop route arcs that are not on the
// traced origin->destination path when doing so keeps the assignment
// feasible and no worse. Keeps extract_schedule happy on tied optima.
bool clean_assignment(const MilpModel& model, std::vector<double>& a) {
    std::vector<double> cleaned = a;
    bool changed = false;
    const ExpandedNetwork& nw = *model.net;
    for (int v = 0; v < static_cast<int>(nw.graphs.size()); ++v) {
        const VesselGraph& g = nw.graphs[v];
        std::vector<bool> on_path(g.arcs.size(), false);
        int current = g.origin_node();
        int steps = 0;
        while (current != g.destination_node()) {
            int next = -1;
            for (int arc : g.out_arcs[current]) {
                if (cleaned[model.x_index[v][arc]] <= 0.5) continue;
                if (next >= 0) return false;  // genuine branching, give up
                next = arc;
            }
            if (next < 0) return false;
            on_path[next] = true;
            current = g.arcs[next].head;
            if (++steps > static_cast<int>(g.nodes.size())) return false;
        }
        for (int arc = 0; arc < static_cast<int>(g.arcs.size()); ++arc) {
            if (on_path[arc] || cleaned[model.x_index[v][arc]] <= 0.5) continue;
            cleaned[model.x_index[v][arc]] = 0.0;
            if (model.d_index[v][arc] >= 0) cleaned[model.d_index[v][arc]] = 0.0;
            changed = true;
        }
    }
    if (!changed) return false;
    if (!model.row_violations(cleaned, model.options.feasibility_tol).empty()) return false;
    if (model.objective_value(cleaned) < model.objective_value(a) - 1e-9) return false;
    a = std::move(cleaned);
    return true;
}

struct BnbNode {
    double bound = 0.0;  // parent LP value, valid upper bound
    long id = 0;
    int depth = 0;
    int branch_var = -1;
    double parent_value = 0.0;
    double parent_frac = 0.0;
    std::vector<std::pair<int, double>> fixes;  // (var, value)
};

struct NodeOrder {
    bool operator()(const BnbNode& a, const BnbNode& b) const {
        if (a.bound != b.bound) return a.bound < b.bound;  // max-heap on bound
        return a.id > b.id;
    }
};

struct PseudoCost {
    double up_sum = 0.0, down_sum = 0.0;
    int up_n = 0, down_n = 0;
};

}  // namespace

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::FeasibleTimeLimit: return "feasible(time-limit)";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unbounded: return "unbounded";
    }
    return "?";
}

double relative_gap(double bound, double incumbent) {
    return (bound - incumbent) / std::max(std::fabs(incumbent), 1e-9);
}

SolverOptions SolverOptions::with_env_overrides() const {
    SolverOptions out = *this;
    if (const char* env = std::getenv("SCHEDULER_TIME_LIMIT_S")) {
        try {
            out.time_limit_s = std::stod(env);
        } catch (const std::exception&) {
            // ignore unparsable overrides
        }
    }
    return out;
}

LpRelaxation lp_solve(const MilpModel& model, const LpOptions& options) {
    RelaxedLp relaxed = to_lp(model, lower_bounds(model), upper_bounds(model));
    LpResult res = solve_lp(relaxed.lp, options);
    LpRelaxation out;
    out.status = res.status;
    out.value = -res.value;
    out.primal = std::move(res.x);
    out.dual.resize(res.dual.size());
    for (size_t i = 0; i < res.dual.size(); ++i)
        out.dual[i] = relaxed.flipped[i] ? res.dual[i] : -res.dual[i];
    out.reduced.resize(res.reduced.size());
    for (size_t j = 0; j < res.reduced.size(); ++j) out.reduced[j] = -res.reduced[j];
    out.iterations = res.iterations;
    return out;
}

SolveResult solve(const MilpModel& model, const SolverOptions& options) {
    guard_size(model, options);
    auto start = Clock::now();
    auto deadline = start + std::chrono::duration_cast<Clock::duration>(
                                std::chrono::duration<double>(options.time_limit_s));
    SolveResult result;

    std::vector<double> base_lo = lower_bounds(model);
    std::vector<double> base_hi = upper_bounds(model);
    std::vector<int> binaries;
    for (int j = 0; j < static_cast<int>(model.vars.size()); ++j)
        if (model.vars[j].is_binary) binaries.push_back(j);

    if (model.vars.empty()) {
        result.status = SolveStatus::Optimal;
        result.has_incumbent = true;
        result.objective = result.bound = 0.0;
        return result;
    }

    LpOptions lp_opt;
    lp_opt.deadline = deadline;

    auto solve_node_lp = [&](const BnbNode& node, std::vector<double>& lo,
                             std::vector<double>& hi) {
        lo = base_lo;
        hi = base_hi;
        for (const auto& [var, val] : node.fixes) lo[var] = hi[var] = val;
        RelaxedLp relaxed = to_lp(model, lo, hi);
        LpResult res = solve_lp(relaxed.lp, lp_opt);
        result.lp_iterations += res.iterations;
        return res;
    };

    const double itol = model.options.integrality_tol;
    auto fractional = [&](const std::vector<double>& x, int j) {
        return std::fabs(x[j] - std::round(x[j])) > itol;
    };

    bool have_inc = false;
    double inc_value = -kInf;
    std::vector<double> inc_assignment;
    auto offer_incumbent = [&](double value, const std::vector<double>& x) {
        if (!have_inc || value > inc_value + 1e-12) {
            have_inc = true;
            inc_value = value;
            inc_assignment = x;
        }
    };

    // Rounding heuristic: pin binaries at their rounded LP values and
    // re-solve the continuous part.
    auto try_rounding = [&](const std::vector<double>& x) {
        std::vector<double> lo = base_lo, hi = base_hi;
        for (int j : binaries) {
            double r = std::round(x[j]);
            r = std::min(std::max(r, base_lo[j]), base_hi[j]);
            lo[j] = hi[j] = r;
        }
        RelaxedLp relaxed = to_lp(model, lo, hi);
        LpResult res = solve_lp(relaxed.lp, lp_opt);
        result.lp_iterations += res.iterations;
        if (res.status == LpStatus::Optimal) offer_incumbent(-res.value, res.x);
    };

    std::map<int, PseudoCost> pseudo;
    auto pick_branch_var = [&](const std::vector<double>& x) {
        int best = -1;
        double best_score = -1.0;
        for (int j : binaries) {
            if (!fractional(x, j)) continue;
            double frac = x[j] - std::floor(x[j]);
            double dist = std::min(frac, 1.0 - frac);
            double score = dist;
            if (options.branching == SolverOptions::Branching::PseudoCost) {
                auto it = pseudo.find(j);
                if (it != pseudo.end() && it->second.up_n > 0 && it->second.down_n > 0) {
                    double up = it->second.up_sum / it->second.up_n;
                    double down = it->second.down_sum / it->second.down_n;
                    score = std::max(up * (1.0 - frac), 1e-9) * std::max(down * frac, 1e-9);
                }
            }
            if (score > best_score + 1e-15) {
                best_score = score;
                best = j;
            }
        }
        return best;
    };

    // The compensation-only fallback (idle legs, pinned vessels kept at
    // their bounds) is feasible on any well-formed instance and gives an
    // instant incumbent long before the tree produces one.
    if (model.inst && model.net) {
        std::vector<double> seed =
            assignment_from_schedule(model, idle_fleet_schedule(*model.inst));
        for (size_t j = 0; j < seed.size(); ++j)
            seed[j] = std::min(std::max(seed[j], base_lo[j]), base_hi[j]);
        if (model.row_violations(seed, model.options.feasibility_tol).empty())
            offer_incumbent(model.objective_value(seed), seed);
    }

    std::priority_queue<BnbNode, std::vector<BnbNode>, NodeOrder> open;
    std::vector<BnbNode> plunge_stack;
    long next_id = 0;
    double root_bound = kInf;
    bool timed_out = false;
    bool root_infeasible = false;

    {
        BnbNode root;
        root.id = next_id++;
        root.bound = kInf;
        plunge_stack.push_back(root);
    }

    long plunge_budget = 4 * static_cast<long>(binaries.size()) + 16;

    auto prune_threshold = [&]() {
        if (!have_inc) return -kInf;
        return inc_value + options.rel_gap_target * std::max(std::fabs(inc_value), 1e-9);
    };

    auto process = [&](BnbNode node, bool depth_first) -> bool {
        // Returns false on timeout. Children go to the plunge stack
        // (nearest-integer child on top) or the best-bound queue.
        if (Clock::now() > deadline) {
            open.push(node);  // keep its bound in the open set
            return false;
        }
        result.nodes++;
        std::vector<double> lo, hi;
        LpResult res = solve_node_lp(node, lo, hi);
        if (res.status == LpStatus::TimeLimit) {
            open.push(node);
            return false;
        }
        if (res.status == LpStatus::Infeasible) {
            if (node.depth == 0) root_infeasible = true;
            return true;
        }
        if (res.status != LpStatus::Optimal)
            throw std::runtime_error("LP kernel failed inside branch and bound");
        double value = -res.value;
        if (node.depth == 0) root_bound = value;

        if (node.branch_var >= 0) {
            double drop = std::max(node.parent_value - value, 0.0);
            PseudoCost& pc = pseudo[node.branch_var];
            bool up = !node.fixes.empty() && node.fixes.back().second > 0.5;
            double frac = node.parent_frac;
            if (up) {
                pc.up_sum += drop / std::max(1.0 - frac, 1e-9);
                pc.up_n++;
            } else {
                pc.down_sum += drop / std::max(frac, 1e-9);
                pc.down_n++;
            }
        }

        if (value <= prune_threshold()) return true;

        int var = pick_branch_var(res.x);
        if (var < 0) {
            offer_incumbent(value, res.x);
            return true;
        }
        if (node.depth == 0 || node.depth % 8 == 0) try_rounding(res.x);

        double frac = res.x[var] - std::floor(res.x[var]);
        BnbNode down = node, up = node;
        down.id = next_id++;
        up.id = next_id++;
        down.depth = up.depth = node.depth + 1;
        down.bound = up.bound = value;
        down.branch_var = up.branch_var = var;
        down.parent_value = up.parent_value = value;
        down.parent_frac = up.parent_frac = frac;
        down.fixes.push_back({var, 0.0});
        up.fixes.push_back({var, 1.0});
        bool up_first = frac >= 0.5;  // nearest integer explored first
        if (depth_first) {
            plunge_stack.push_back(up_first ? down : up);
            plunge_stack.push_back(up_first ? up : down);
        } else {
            open.push(down);
            open.push(up);
        }
        return true;
    };

    // Depth-first plunge until a first incumbent (or the budget runs out).
    while (!plunge_stack.empty()) {
        if (have_inc || result.nodes >= plunge_budget) {
            for (auto& n : plunge_stack) open.push(std::move(n));
            plunge_stack.clear();
            break;
        }
        BnbNode node = std::move(plunge_stack.back());
        plunge_stack.pop_back();
        if (!process(std::move(node), true)) {
            timed_out = true;
            for (auto& n : plunge_stack) open.push(std::move(n));
            plunge_stack.clear();
            break;
        }
    }

    // Best-bound main loop.
    while (!timed_out && !open.empty()) {
        if (have_inc && open.top().bound <= prune_threshold()) break;
        BnbNode node = open.top();
        open.pop();
        if (!process(std::move(node), false)) {
            timed_out = true;
            break;
        }
    }

    double open_bound = have_inc ? inc_value : -kInf;
    if (!open.empty()) open_bound = std::max(open_bound, open.top().bound);
    if (open_bound == kInf) open_bound = root_bound;  // unsolved root on timeout

    result.wall_time_s =
        std::chrono::duration<double>(Clock::now() - start).count();

    if (root_infeasible && !have_inc) {
        result.status = SolveStatus::Infeasible;
        return result;
    }
    result.has_incumbent = have_inc;
    if (have_inc) {
        clean_assignment(model, inc_assignment);
        result.objective = model.objective_value(inc_assignment);
        result.assignment = std::move(inc_assignment);
    }
    result.bound = have_inc ? std::max(open_bound, result.objective) : open_bound;
    result.rel_gap = have_inc ? relative_gap(result.bound, result.objective) : kInf;
    if (!have_inc) {
        // Either ran out of time, or every leaf was LP-infeasible.
        result.status = (timed_out || !open.empty()) ? SolveStatus::FeasibleTimeLimit
                                                     : SolveStatus::Infeasible;
    } else if (!timed_out && result.rel_gap <= options.rel_gap_target + 1e-15) {
        result.status = SolveStatus::Optimal;
    } else {
        result.status = SolveStatus::FeasibleTimeLimit;
    }
    return result;
}

}  // namespace shipsched

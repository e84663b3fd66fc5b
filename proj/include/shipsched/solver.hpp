#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shipsched/model.hpp"
#include "shipsched/simplex.hpp"

namespace shipsched {

enum class SolveStatus { Optimal, FeasibleTimeLimit, Infeasible, Unbounded };

std::string to_string(SolveStatus s);

struct SolverOptions {
    double time_limit_s = 1800.0;
    double rel_gap_target = 1e-6;
    enum class NodeSelection { BestBound } node_selection = NodeSelection::BestBound;
    enum class Branching { MostFractional, PseudoCost } branching = Branching::MostFractional;
    std::uint64_t seed = 1;        // reserved; the engine itself is deterministic
    int max_lp_rows = 4096;        // dense LP kernel guard

    /// SCHEDULER_TIME_LIMIT_S overrides the time limit when set.
    SolverOptions with_env_overrides() const;
};

struct SolveResult {
    SolveStatus status = SolveStatus::Infeasible;
    bool has_incumbent = false;
    double objective = 0.0;          // best incumbent value f (maximization)
    double bound = 0.0;              // valid dual bound, bound >= f
    double rel_gap = 0.0;            // (bound - f) / max(|f|, 1e-9)
    std::vector<double> assignment;  // incumbent column values
    long nodes = 0;
    long lp_iterations = 0;
    double wall_time_s = 0.0;
};

/// Relative optimality gap of a maximization solve.
double relative_gap(double bound, double incumbent);

/// LP relaxation of the model: binaries become [0,1] continuous.
struct LpRelaxation {
    LpStatus status = LpStatus::IterLimit;
    double value = 0.0;              // in the model's (max) orientation
    std::vector<double> primal;
    std::vector<double> dual;        // per row, max orientation, original senses
    std::vector<double> reduced;
    long iterations = 0;
};
LpRelaxation lp_solve(const MilpModel& model, const LpOptions& options = {});

/// Reference branch and bound: best-bound node selection with a
/// depth-first plunge for the first incumbent, most-fractional or
/// pseudo-cost branching, rounding heuristic at nodes.
SolveResult solve(const MilpModel& model, const SolverOptions& options = {});

}  // namespace shipsched

#pragma once

#include <chrono>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace shipsched {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Minimization LP in computational form: finite lower bounds on every
/// structural variable, rows are <= or ==  (callers flip >= rows).
struct LpProblem {
    int n = 0;                       // structural variable count
    std::vector<double> cost;        // minimize c'x
    std::vector<double> lo, hi;      // hi may be +inf
    struct Row {
        std::vector<std::pair<int, double>> terms;
        double rhs = 0.0;
        bool eq = false;             // false: <=
    };
    std::vector<Row> rows;
};

enum class LpStatus { Optimal, Infeasible, IterLimit, TimeLimit, Singular };

struct LpResult {
    LpStatus status = LpStatus::IterLimit;
    double value = 0.0;
    std::vector<double> x;           // structural values
    std::vector<double> dual;        // one multiplier per row, y = c_B B^-1
    std::vector<double> reduced;     // structural reduced costs c_j - y'A_j
    long iterations = 0;
};

struct LpOptions {
    long max_iterations = 0;  // 0: automatic from problem size
    double feas_tol = 1e-7;
    double pivot_tol = 1e-9;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// Bounded-variable primal simplex: Dantzig pricing with a Bland fallback
/// after a run of degenerate pivots, dense basis inverse with periodic
/// refactorization, artificial-variable phase 1.
LpResult solve_lp(const LpProblem& lp, const LpOptions& options = {});

}  // namespace shipsched

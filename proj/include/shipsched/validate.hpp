#pragma once

#include <string>
#include <utility>
#include <vector>

#include "shipsched/instance.hpp"
#include "shipsched/schedule.hpp"

namespace shipsched {

/// One broken constraint family, measured directly from instance data.
struct ScheduleViolation {
    int family = 0;        // 2..14
    std::string entity;    // vessel/contract/window id
    double slack = 0.0;    // how far off, in natural units (h, m, pallets)
    std::string detail;
};

struct ValidationReport {
    std::vector<ScheduleViolation> violations;
    bool ok() const { return violations.empty(); }
    bool has_family(int family) const;
    std::string to_json() const;
};

/// Solver-independent feasibility check of a schedule: contract balance,
/// route structure, draft accumulation against berth headroom, time
/// propagation with loading times, window bounds, shared-window
/// sequencing, due dates. Every constraint family (2)-(14) has a
/// dedicated check.
ValidationReport check_schedule(const Instance& inst, const Schedule& schedule,
                                double tol = 1e-6);

/// Objective contribution of one vessel: income of its contracts minus
/// its fees, rent, fuel (light and draft-borne) and compensation.
double vessel_objective(const Instance& inst, const Schedule& schedule, int vessel);

/// Recompute the full objective from the schedule alone. Rejects
/// infeasible schedules.
double objective_recompute(const Instance& inst, const Schedule& schedule);

/// The summary-table gap: (f_reference - f_value) / f_reference.
double reporting_gap(double f_reference, double f_value);

/// Docking and utilization figures in the shape of the summary tables.
struct FleetStats {
    double avg_docks = 0.0;
    int max_docks = 0;
    double avg_used_capacity = 0.0;  // fraction of Q, averaged over vessels
    double cargo_satisfied = 0.0;    // fraction of all contracted pallets
};
FleetStats fleet_stats(const Instance& inst, const Schedule& schedule);

struct OracleLimits {
    int max_vessels = 2;
    int max_window_nodes = 4;   // accessible windows per vessel
    int max_shared_windows = 2; // windows accessible to both vessels
};

/// Exhaustive reference optimum: enumerate every simple route per vessel
/// and every docking order at windows both routes visit, solve the
/// remaining LP in loads, times, shortfalls. Ties resolve to the
/// lexicographically smallest route encoding.
std::pair<double, Schedule> brute_force_optimum(const Instance& inst,
                                                const OracleLimits& limits = {});

}  // namespace shipsched

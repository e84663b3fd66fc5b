#pragma once

#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "shipsched/instance.hpp"
#include "shipsched/network.hpp"
#include "shipsched/schedule.hpp"

namespace shipsched {

class ScheduleMismatchError : public std::runtime_error {
public:
    explicit ScheduleMismatchError(const std::string& what) : std::runtime_error(what) {}
};

enum class VarKind {
    RouteArc,     // x: vessel sails an arc
    ArrivalTime,  // t: vessel time at a node
    DraftFlow,    // d: cumulative draft increase carried on an arc
    WindowLoad,   // p: pallets of a contract loaded at a window
    Shortfall,    // s: pallets of a contract left ashore
    DockOrder,    // y: vessel1 docks before vessel2 at a window
};

struct VarInfo {
    VarKind kind = VarKind::RouteArc;
    double lo = 0.0, hi = 0.0;
    bool is_binary = false;
    int vessel = -1;
    int vessel2 = -1;   // DockOrder only
    int arc = -1;       // arc id within the vessel graph
    int node = -1;      // node id within the vessel graph
    int window = -1;    // global window index
    int contract = -1;
};

enum class RowSense { LE, GE, EQ };

struct LinRow {
    std::vector<std::pair<int, double>> terms;  // (variable index, coefficient)
    RowSense sense = RowSense::LE;
    double rhs = 0.0;
    int family = 0;  // objective/constraint family 2..14
    int vessel = -1, vessel2 = -1, window = -1, contract = -1, node = -1, arc = -1;
};

struct BigMRecord {
    std::vector<std::map<int, double>> m1;  // [vessel][arc] draft-flow cap
    std::vector<double> m2;                 // [contract] load cap (= cargo size)
    double m3 = 0.0, m4 = 0.0, m5 = 0.0;    // time-chain deactivators
};

struct BuildOptions {
    double feasibility_tol = 1e-6;
    double integrality_tol = 1e-6;
};

/// Solver-agnostic sparse MILP over a reduced expanded network. Keeps
/// full metadata mapping columns and rows back to network entities so
/// schedules can be pinned and recovered.
struct MilpModel {
    std::shared_ptr<const Instance> inst;
    std::shared_ptr<const ExpandedNetwork> net;
    BuildOptions options;

    std::vector<VarInfo> vars;
    std::vector<double> obj;  // aligned with vars; sense is maximize
    bool maximize = true;
    std::vector<LinRow> rows;
    BigMRecord big_m;

    // Column lookup tables (-1 where the variable does not exist).
    std::vector<std::vector<int>> x_index;                 // [vessel][arc]
    std::vector<std::vector<int>> t_index;                 // [vessel][node]
    std::vector<std::vector<int>> d_index;                 // [vessel][arc]
    std::vector<std::map<std::pair<int, int>, int>> p_index;  // [vessel][{node, contract}]
    std::vector<int> s_index;                              // [contract]
    std::map<std::tuple<int, int, int>, int> y_index;      // {window, v1, v2}

    int var_count(VarKind kind) const;
    int row_count(int family) const;
    std::string var_name(int index) const;
    std::string stats_string() const;

    double objective_value(const std::vector<double>& assignment) const;
    /// Row activity violations beyond tol: (row index, amount).
    std::vector<std::pair<int, double>> row_violations(const std::vector<double>& assignment,
                                                       double tol) const;
};

BigMRecord compute_big_m(const ExpandedNetwork& net, const Instance& inst);

MilpModel build_model(std::shared_ptr<const ExpandedNetwork> net,
                      std::shared_ptr<const Instance> inst, const BuildOptions& options = {});

/// Pin every variable of `vessel` (and the shortfalls of its contracts)
/// to the given schedule. Throws ScheduleMismatchError when the schedule
/// contradicts the model's own rows.
MilpModel fix_vessel(const MilpModel& model, int vessel, const Schedule& schedule);

/// Remove the vessel-pair sequencing rows (families 9 and 10) touching
/// any vessel in `vessels`, along with dock-order variables that no
/// remaining row references.
MilpModel drop_sequencing(const MilpModel& model, const std::vector<int>& vessels);

/// Rebuild the Schedule encoded by a (near-)integral assignment. Throws
/// on fractional binaries or route arcs that do not trace a single
/// origin->destination path.
Schedule extract_schedule(const MilpModel& model, const std::vector<double>& assignment);

/// Canonical assignment for a schedule: route arcs on, docked times and
/// loads copied, undocked window times parked at min(l_w, horizon),
/// draft flows accumulated along the route, dock orders from the
/// schedule. The result satisfies every row for feasible schedules.
std::vector<double> assignment_from_schedule(const MilpModel& model, const Schedule& schedule);

}  // namespace shipsched

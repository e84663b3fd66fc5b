#pragma once

#include <map>
#include <string>
#include <vector>

#include "shipsched/instance.hpp"

namespace shipsched {

/// One call at a berth time window: when the vessel starts operating and
/// how many pallets of each contract it takes aboard there.
struct Docking {
    int window = -1;                // global window index
    double arrive_h = 0.0;          // docking time at the window
    std::map<int, double> loads;    // contract index -> pallets

    double total_load() const {
        double t = 0.0;
        for (const auto& [c, p] : loads) t += p;
        return t;
    }
    double service_hours(const Instance& inst) const {
        return inst.windows[window].load_time_per_pallet_h * total_load();
    }
};

struct VesselSchedule {
    int vessel = -1;
    double depart_h = 0.0;          // leaves the origin
    double arrive_dest_h = 0.0;     // reaches the destination port
    std::vector<Docking> dockings;  // in route order; empty = idle leg

    bool idle() const { return dockings.empty(); }
};

/// The solution artifact every module exchanges.
struct Schedule {
    std::vector<VesselSchedule> vessels;     // indexed by vessel
    std::vector<double> shortfall;           // per contract, pallets ashore
    // Docking order at windows used by several vessels (vessel indices,
    // first to dock first). Derived from times when absent.
    std::map<int, std::vector<int>> window_order;

    double loaded_by_vessel(int v, const Instance& inst) const;
    int dockings_of(int v) const { return static_cast<int>(vessels[v].dockings.size()); }
};

/// An idle round trip for one vessel: straight to the destination, full
/// compensation on its contracts.
VesselSchedule idle_vessel_schedule(const Instance& inst, int vessel);
Schedule idle_fleet_schedule(const Instance& inst);

std::string schedule_to_json(const Schedule& s, const Instance& inst);
Schedule schedule_from_json(const std::string& text, const Instance& inst);

}  // namespace shipsched

#pragma once

#include "shipsched/instance.hpp"
#include "shipsched/schedule.hpp"

namespace shipsched::testing {

/// Two vessels, three windows (one at a shallow berth), generous prices
/// and due dates: room to break any single constraint family in
/// isolation.
inline Instance breaker_instance() {
    Instance inst;
    inst.ports = {"PD1", "PD2", "PO", "PT"};
    inst.sailing_hours = {
        {0, 8, 18, 10},
        {8, 0, 18, 10},
        {18, 18, 0, 10},
        {10, 10, 10, 0},
    };
    inst.vessels.push_back({"V1", "PO", 5.0, 1000, 1.0, 1.0, 14.0, std::nullopt});
    inst.vessels.push_back({"V2", "PO", 5.0, 1000, 1.0, 1.0, 14.0, std::nullopt});
    inst.contracts.push_back({"C1", "V1", "PD1", 100, 10.0, {}, 1.0, 1000.0});
    inst.contracts.push_back({"C2", "V2", "PD2", 100, 10.0, {}, 1.0, 1000.0});
    inst.berths.push_back({"B1", "PT", 105.0});  // effectively no draft cap
    inst.berths.push_back({"B2", "PT", 5.5});    // 0.5 m of headroom
    inst.windows.push_back({"W1", "B1", 0.0, 200.0, 10.0, {}, 0.01});
    inst.windows.push_back({"W2", "B1", 300.0, 400.0, 10.0, {}, 0.01});
    inst.windows.push_back({"W3", "B2", 0.0, 200.0, 10.0, {}, 0.01});
    inst.draft_per_pallet_m = 0.01;
    inst.finalize();
    return inst;
}

/// A schedule violating exactly constraint family `family` (2..14) of the
/// breaker instance, and nothing else.
inline Schedule broken_schedule(const Instance& inst, int family) {
    Schedule s = idle_fleet_schedule(inst);
    auto dock = [&](int vessel, int window, double arrive,
                    std::map<int, double> loads) {
        Docking d;
        d.window = window;
        d.arrive_h = arrive;
        d.loads = std::move(loads);
        s.vessels[vessel].dockings.push_back(d);
    };
    switch (family) {
        case 2:  // shortfall short by 10
            dock(0, 0, 10.0, {{0, 50.0}});
            s.vessels[0].arrive_dest_h = 20.5;
            s.shortfall[0] = 40.0;
            break;
        case 3:  // same window visited twice
            dock(0, 0, 10.0, {});
            dock(0, 0, 50.0, {});
            s.vessels[0].arrive_dest_h = 60.0;
            break;
        case 4:  // negative load, balance kept
            dock(0, 0, 10.0, {{0, -5.0}});
            s.vessels[0].arrive_dest_h = 20.0;
            s.shortfall[0] = 105.0;
            break;
        case 5:  // carries twice the assigned cargo, balance kept
            dock(0, 0, 10.0, {{0, 100.0}});
            dock(0, 1, 300.0, {{0, 100.0}});
            s.vessels[0].arrive_dest_h = 311.0;
            s.shortfall[0] = -100.0;
            break;
        case 6:  // loads another vessel's contract
            dock(0, 0, 10.0, {{1, 10.0}});
            s.vessels[0].arrive_dest_h = 20.1;
            s.shortfall[1] = 90.0;
            break;
        case 7:  // docks before the leg from the origin can arrive
            dock(0, 0, 5.0, {{0, 10.0}});
            s.vessels[0].arrive_dest_h = 15.1;
            s.shortfall[0] = 90.0;
            break;
        case 8:  // second call earlier than service plus sailing allows
            dock(0, 0, 10.0, {{0, 50.0}});
            dock(0, 2, 10.2, {});
            s.vessels[0].arrive_dest_h = 20.2;
            s.shortfall[0] = 50.0;
            break;
        case 9:  // V2 docks while V1 is still loading
            dock(0, 0, 10.0, {{0, 50.0}});
            dock(1, 0, 10.2, {});
            s.vessels[0].arrive_dest_h = 20.5;
            s.vessels[1].arrive_dest_h = 20.2;
            s.shortfall[0] = 50.0;
            break;
        case 10:  // recorded order contradicts the times (no overlap)
            dock(0, 0, 10.0, {{0, 50.0}});
            dock(1, 0, 20.0, {});
            s.vessels[0].arrive_dest_h = 20.5;
            s.vessels[1].arrive_dest_h = 30.0;
            s.shortfall[0] = 50.0;
            s.window_order[0] = {1, 0};
            break;
        case 11:  // 60 pallets of draft against 0.5 m of headroom
            dock(0, 2, 10.0, {{0, 60.0}});
            s.vessels[0].arrive_dest_h = 20.6;
            s.shortfall[0] = 40.0;
            break;
        case 12:  // docks before the window opens
            dock(0, 1, 290.0, {{0, 10.0}});
            s.vessels[0].arrive_dest_h = 300.1;
            s.shortfall[0] = 90.0;
            break;
        case 13:  // still loading when the window closes
            dock(0, 0, 199.5, {{0, 100.0}});
            s.vessels[0].arrive_dest_h = 210.5;
            s.shortfall[0] = 0.0;
            break;
        case 14:  // arrives past the due date
            s.vessels[0].arrive_dest_h = 1000.5;
            break;
        default:
            break;
    }
    return s;
}

}  // namespace shipsched::testing

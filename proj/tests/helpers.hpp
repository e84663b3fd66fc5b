#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "shipsched/instance.hpp"

namespace shipsched::testing {

/// 1 vessel, 1 contract, 1 berth, 1 window, metric sailing matrix.
/// Closed-form optimum: load all 100 pallets in W1, f = 818; idle f = -190.
inline Instance desk_instance() {
    Instance inst;
    inst.ports = {"PD", "PO", "PT"};
    // order PD, PO, PT (canonical sorted order)
    inst.sailing_hours = {{0, 18, 10}, {18, 0, 10}, {10, 10, 0}};
    inst.vessels.push_back({"V1", "PO", 5.0, 200, 2.0, 3.0, 14.0, std::nullopt});
    inst.contracts.push_back({"C1", "V1", "PD", 100, 10.0, {}, 1.0, 200.0});
    inst.berths.push_back({"B1", "PT", 8.0});
    inst.windows.push_back({"W1", "B1", 0.0, 100.0, 50.0, {}, 0.1});
    inst.draft_per_pallet_m = 0.02;
    inst.finalize();
    return inst;
}

/// The two-vessel, two-berth, two-windows-per-berth topology: 6 nodes and
/// 21 arcs per vessel before reduction, 4 shared windows.
inline Instance fig1_instance() {
    Instance inst;
    inst.ports = {"PD", "PO", "PT1", "PT2"};
    inst.sailing_hours = {
        {0, 18, 10, 8},
        {18, 0, 10, 12},
        {10, 10, 0, 4},
        {8, 12, 4, 0},
    };
    inst.vessels.push_back({"V1", "PO", 6.0, 500, 2.0, 3.0, 14.0, std::nullopt});
    inst.vessels.push_back({"V2", "PO", 6.0, 500, 2.0, 3.0, 14.0, std::nullopt});
    inst.contracts.push_back({"C1", "V1", "PD", 400, 10.0, {}, 1.0, 300.0});
    inst.contracts.push_back({"C2", "V2", "PD", 400, 9.0, {}, 1.0, 300.0});
    inst.berths.push_back({"B1", "PT1", 9.0});
    inst.berths.push_back({"B2", "PT2", 9.0});
    inst.windows.push_back({"W1", "B1", 0.0, 40.0, 40.0, {}, 0.05});
    inst.windows.push_back({"W2", "B1", 48.0, 88.0, 40.0, {}, 0.05});
    inst.windows.push_back({"W3", "B2", 0.0, 40.0, 40.0, {}, 0.05});
    inst.windows.push_back({"W4", "B2", 48.0, 88.0, 40.0, {}, 0.05});
    inst.draft_per_pallet_m = 0.002;
    inst.finalize();
    return inst;
}

/// Small seeded random instances inside the oracle limits: up to 2
/// vessels, 2 berths x 2 windows, 3 contracts, accessibility trimmed so
/// at most 2 windows are shared. Windows are deliberately tight enough
/// that the reduction rules fire on a healthy share of draws.
inline Instance tiny_random_instance(std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    auto uni = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(eng);
    };
    auto pick = [&](int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(eng);
    };
    auto q = [&](double x, int dec) {
        double s = std::pow(10.0, dec);
        return std::round(x * s) / s;
    };

    int vessels = pick(1, 2);
    int berths = pick(1, 2);
    int windows_per_berth = pick(1, 2);
    int contracts = pick(vessels, 3);

    Instance inst;
    inst.ports = {"PD1", "PD2", "PO1", "PO2", "PT1", "PT2"};
    int n = static_cast<int>(inst.ports.size());
    std::vector<std::vector<std::int64_t>> leg(n, std::vector<std::int64_t>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) leg[i][j] = leg[j][i] = pick(400, 2600);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) leg[i][j] = std::min(leg[i][j], leg[i][k] + leg[k][j]);
    inst.sailing_hours.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inst.sailing_hours[i][j] = leg[i][j] / 100.0;

    for (int b = 0; b < berths; ++b)
        inst.berths.push_back({"B" + std::to_string(b + 1),
                               b % 2 == 0 ? "PT1" : "PT2", q(uni(6.0, 10.0), 1)});

    std::vector<std::string> window_ids;
    for (int b = 0; b < berths; ++b) {
        double cursor = pick(0, 10);
        for (int k = 0; k < windows_per_berth; ++k) {
            TimeWindowSpec w;
            w.id = "B" + std::to_string(b + 1) + "W" + std::to_string(k + 1);
            w.berth = inst.berths[b].id;
            double bw = pick(6, 40);
            w.lower_h = cursor;
            w.upper_h = cursor + bw;
            cursor += bw + pick(2, 10);
            w.fee = pick(30, 120);
            w.load_time_per_pallet_h = q(uni(0.02, 0.3), 4);
            inst.windows.push_back(w);
            window_ids.push_back(w.id);
        }
    }

    // Trim accessibility so two vessels share at most two windows.
    std::vector<std::optional<std::vector<std::string>>> access(vessels);
    if (vessels == 2 && window_ids.size() > 2) {
        std::vector<std::string> shared(window_ids.begin(),
                                        window_ids.begin() + 2);
        std::vector<std::string> v1 = shared, v2 = shared;
        for (size_t k = 2; k < window_ids.size(); ++k)
            (k % 2 == 0 ? v1 : v2).push_back(window_ids[k]);
        access[0] = v1;
        access[1] = v2;
    }

    std::int64_t total = pick(60, 400);
    std::vector<std::int64_t> sizes(contracts, 0);
    for (int c = 0; c < contracts; ++c) sizes[c] = 1;
    for (std::int64_t k = contracts; k < total; ++k) sizes[pick(0, contracts - 1)]++;

    std::vector<std::int64_t> assigned(vessels, 0);
    for (int c = 0; c < contracts; ++c) assigned[c % vessels] += sizes[c];

    for (int v = 0; v < vessels; ++v) {
        VesselSpec vs;
        vs.id = "V" + std::to_string(v + 1);
        vs.origin_port = v % 2 == 0 ? "PO1" : "PO2";
        vs.light_draft_m = q(uni(5.0, 7.5), 1);
        vs.capacity_pallets = assigned[v] + pick(0, 50);
        vs.rent_rate = q(uni(0.5, 3.0), 2);
        vs.fuel_rate = q(uni(1.0, 5.0), 2);
        vs.speed_knots = 14.0;
        vs.accessible_windows = access[v];
        inst.vessels.push_back(vs);
    }

    double max_assigned = static_cast<double>(
        *std::max_element(assigned.begin(), assigned.end()));
    inst.draft_per_pallet_m = std::max(1e-6, q(uni(1.0, 4.0) / max_assigned, 6));

    inst.finalize();  // port lookups below
    for (int c = 0; c < contracts; ++c) {
        ContractSpec spec;
        spec.id = "C" + std::to_string(c + 1);
        int v = c % vessels;
        spec.vessel = inst.vessels[v].id;
        spec.destination_port = v % 2 == 0 ? "PD1" : "PD2";
        spec.size_pallets = sizes[c];
        spec.income_per_pallet = q(uni(8.0, 14.0), 2);
        spec.compensation_per_pallet = q(uni(1.0, 5.0), 2);
        // Due date: a little past the best single-window completion.
        int op = inst.port_index(inst.vessels[v].origin_port);
        int dp = inst.port_index(spec.destination_port);
        double best = inst.sail_hours(op, dp);
        for (int w = 0; w < static_cast<int>(inst.windows.size()); ++w) {
            int bp = inst.berth_port_of_window(w);
            double arrive = std::max(inst.sail_hours(op, bp), inst.windows[w].lower_h);
            double load = inst.windows[w].load_time_per_pallet_h *
                          static_cast<double>(assigned[v]);
            best = std::max(best, arrive + load + inst.sail_hours(bp, dp));
        }
        spec.due_date_h = std::ceil(best * uni(1.05, 1.5)) + pick(0, 24);
        inst.contracts.push_back(spec);
    }
    std::sort(inst.contracts.begin(), inst.contracts.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    inst.finalize();
    return inst;
}

/// One berth, two windows, each too narrow to take the full contract:
/// the optimum docks the same vessel at the same berth twice (60 + 40
/// pallets), with benefit 760 against 390.8 for the best single call.
inline Instance multiple_docking_instance() {
    Instance inst;
    inst.ports = {"PD", "PO", "PT"};
    inst.sailing_hours = {{0, 18, 10}, {18, 0, 10}, {10, 10, 0}};
    inst.vessels.push_back({"V1", "PO", 5.0, 200, 2.0, 3.0, 14.0, std::nullopt});
    inst.contracts.push_back({"C1", "V1", "PD", 100, 10.0, {}, 1.0, 200.0});
    inst.berths.push_back({"B1", "PT", 8.0});
    inst.windows.push_back({"W1", "B1", 10.0, 16.0, 50.0, {}, 0.1});
    inst.windows.push_back({"W2", "B1", 20.0, 26.0, 50.0, {}, 0.1});
    inst.draft_per_pallet_m = 0.02;
    inst.finalize();
    return inst;
}

/// Three vessels engineered so the isolated benefits come out at exactly
/// 2000 / 3000 / 2500, and re-solving after the best vessel is fixed
/// yields {2000, 1800}: V1 has a private window, V2 and V3 contend for a
/// tight shared one, V2's due date pins it to dock at opening time.
inline Instance phase1_trace_instance() {
    Instance inst;
    inst.ports = {"PD1", "PD2", "PD3", "PO", "PT"};
    inst.sailing_hours = {
        {0, 8, 8, 18, 10},
        {8, 0, 8, 18, 10},
        {8, 8, 0, 18, 10},
        {18, 18, 18, 0, 10},
        {10, 10, 10, 10, 0},
    };
    inst.vessels.push_back({"V1", "PO", 5.0, 400, 10.0, 5.0, 14.0,
                            std::vector<std::string>{"W1"}});
    inst.vessels.push_back({"V2", "PT", 5.0, 500, 10.0, 5.0, 14.0,
                            std::vector<std::string>{"WS"}});
    inst.vessels.push_back({"V3", "PT", 5.0, 500, 10.0, 5.0, 14.0,
                            std::vector<std::string>{"WS"}});
    inst.contracts.push_back({"C1", "V1", "PD1", 400, 6.0, {}, 0.0, 200.0});
    inst.contracts.push_back({"C2", "V2", "PD2", 500, 6.525, {}, 0.0, 15.0});
    inst.contracts.push_back({"C3", "V3", "PD3", 500, 5.525, {}, 1.6, 40.0});
    inst.berths.push_back({"B1", "PT", 105.0});
    inst.berths.push_back({"B2", "PT", 105.0});
    inst.windows.push_back({"W1", "B1", 0.0, 100.0, 50.0, {}, 0.01});
    inst.windows.push_back({"WS", "B2", 0.0, 9.0, 50.0, {}, 0.01});
    inst.draft_per_pallet_m = 0.0025;
    inst.finalize();
    return inst;
}

}  // namespace shipsched::testing

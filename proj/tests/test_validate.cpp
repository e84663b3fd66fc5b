#include <doctest.h>

#include <cmath>
#include <memory>

#include "shipsched/network.hpp"
#include "shipsched/solver.hpp"
#include "shipsched/validate.hpp"

#include "breakers.hpp"
#include "helpers.hpp"

using namespace shipsched;

TEST_CASE("idle fleet validates with zero violations") {
    Instance inst = testing::fig1_instance();
    CHECK(check_schedule(inst, idle_fleet_schedule(inst)).ok());
}

TEST_CASE("arriving one hour early is a family-12 violation with slack -1") {
    Instance inst = testing::desk_instance();
    inst.windows[0].lower_h = 20.0;
    inst.finalize();
    Schedule s = idle_fleet_schedule(inst);
    Docking d;
    d.window = 0;
    d.arrive_h = 19.0;
    d.loads[0] = 10.0;
    s.vessels[0].dockings.push_back(d);
    s.vessels[0].arrive_dest_h = 30.0;
    s.shortfall[0] = 90.0;
    ValidationReport report = check_schedule(inst, s);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].family == 12);
    CHECK(report.violations[0].slack == doctest::Approx(-1.0));
}

TEST_CASE("overlapping loading intervals trigger the sequencing family") {
    Instance inst = testing::breaker_instance();
    Schedule s = testing::broken_schedule(inst, 9);
    ValidationReport report = check_schedule(inst, s);
    CHECK(report.has_family(9));
    CHECK_FALSE(report.has_family(10));
}

TEST_CASE("each constraint family triggers exactly its own violation") {
    Instance inst = testing::breaker_instance();
    for (int family = 2; family <= 14; ++family) {
        CAPTURE(family);
        Schedule s = testing::broken_schedule(inst, family);
        ValidationReport report = check_schedule(inst, s);
        CHECK(report.has_family(family));
        for (const auto& v : report.violations) CHECK(v.family == family);
    }
}

TEST_CASE("objective_recompute matches closed forms and rejects bad input") {
    Instance inst = testing::desk_instance();
    SUBCASE("idle closed form") {
        CHECK(objective_recompute(inst, idle_fleet_schedule(inst)) ==
              doctest::Approx(-190.0).epsilon(1e-12));
    }
    SUBCASE("full-load closed form") {
        Schedule s = idle_fleet_schedule(inst);
        Docking d;
        d.window = 0;
        d.arrive_h = 10.0;
        d.loads[0] = 100.0;
        s.vessels[0].dockings.push_back(d);
        s.vessels[0].arrive_dest_h = 30.0;
        s.shortfall[0] = 0.0;
        CHECK(objective_recompute(inst, s) == doctest::Approx(818.0).epsilon(1e-12));
    }
    SUBCASE("infeasible schedules are rejected") {
        Schedule s = idle_fleet_schedule(inst);
        s.shortfall[0] = 0.0;  // breaks the balance
        CHECK_THROWS_AS((void)objective_recompute(inst, s), std::invalid_argument);
    }
}

TEST_CASE("doubling prices doubles income and compensation only") {
    Instance inst = testing::desk_instance();
    Schedule s = idle_fleet_schedule(inst);
    Docking d;
    d.window = 0;
    d.arrive_h = 10.0;
    d.loads[0] = 50.0;
    s.vessels[0].dockings.push_back(d);
    s.vessels[0].arrive_dest_h = 25.0;
    s.shortfall[0] = 50.0;
    double before = objective_recompute(inst, s);

    Instance doubled = inst;
    doubled.contracts[0].income_per_pallet *= 2.0;
    doubled.contracts[0].compensation_per_pallet *= 2.0;
    doubled.finalize();
    double after = objective_recompute(doubled, s);
    double income = 10.0 * 50.0, compensation = 1.0 * 50.0;
    CHECK(after - before == doctest::Approx(income - compensation).epsilon(1e-9));
}

TEST_CASE("oracle matches the closed-form desk optimum and the solver") {
    Instance inst = testing::desk_instance();
    auto [f, schedule] = brute_force_optimum(inst);
    CHECK(f == doctest::Approx(818.0).epsilon(1e-9));
    CHECK(check_schedule(inst, schedule).ok());
    CHECK(objective_recompute(inst, schedule) == doctest::Approx(f).epsilon(1e-9));

    auto pinst = std::make_shared<Instance>(inst);
    auto net = std::make_shared<ExpandedNetwork>(
        reduce_network(build_network(inst), inst));
    SolveResult res = solve(build_model(net, pinst));
    REQUIRE(res.status == SolveStatus::Optimal);
    CHECK(std::fabs(res.objective - f) <= 1e-6 * std::max(1.0, std::fabs(f)));
}

TEST_CASE("oracle returns the idle fleet when compensation beats any docking") {
    Instance inst = testing::desk_instance();
    inst.contracts[0].income_per_pallet = 0.1;
    inst.contracts[0].compensation_per_pallet = 0.05;
    inst.finalize();
    auto [f, schedule] = brute_force_optimum(inst);
    CHECK(f == doctest::Approx(-95.0).epsilon(1e-9));
    CHECK(schedule.vessels[0].dockings.empty());
}

TEST_CASE("two vessels sharing a window get an explicit docking order") {
    // Restrict fig-1 accessibility: W1 shared, W2 only V1, W3 only V2.
    Instance inst = testing::fig1_instance();
    inst.vessels[0].accessible_windows = std::vector<std::string>{"W1", "W2"};
    inst.vessels[1].accessible_windows = std::vector<std::string>{"W1", "W3"};
    // Make W1 clearly the best for both so they contend for it.
    inst.contracts[0].income_overrides["W1"] = 14.0;
    inst.contracts[1].income_overrides["W1"] = 14.0;
    inst.finalize();
    auto [f, schedule] = brute_force_optimum(inst);
    CHECK(check_schedule(inst, schedule).ok());
    int docked_in_w1 = 0;
    for (const auto& vs : schedule.vessels)
        for (const auto& d : vs.dockings) docked_in_w1 += d.window == 0 ? 1 : 0;
    if (docked_in_w1 == 2) {
        REQUIRE(schedule.window_order.count(0) == 1);
        CHECK(schedule.window_order.at(0).size() == 2);
    }

    auto pinst = std::make_shared<Instance>(inst);
    auto net = std::make_shared<ExpandedNetwork>(
        reduce_network(build_network(inst), inst));
    SolveResult res = solve(build_model(net, pinst));
    REQUIRE(res.status == SolveStatus::Optimal);
    CHECK(std::fabs(res.objective - f) <= 1e-6 * std::max(1.0, std::fabs(f)));
}

TEST_CASE("oracle agrees with the solver and never trips a big-M row") {
    for (std::uint64_t seed = 101; seed <= 106; ++seed) {
        CAPTURE(seed);
        Instance inst = testing::tiny_random_instance(seed);
        auto [f, schedule] = brute_force_optimum(inst);
        CHECK(check_schedule(inst, schedule).ok());
        auto pinst = std::make_shared<Instance>(inst);
        auto net = std::make_shared<ExpandedNetwork>(
            reduce_network(build_network(inst), inst));
        MilpModel model = build_model(net, pinst);
        SolveResult res = solve(model);
        REQUIRE(res.status == SolveStatus::Optimal);
        CHECK(std::fabs(res.objective - f) <= 1e-6 * std::max(1.0, std::fabs(f)));
        // Big-M validity: the oracle's schedule satisfies every model row
        // (the deactivation constants never cut feasible points).
        auto assignment = assignment_from_schedule(model, schedule);
        CHECK(model.row_violations(assignment, 1e-5).empty());
        CHECK(model.objective_value(assignment) == doctest::Approx(f).epsilon(1e-7));
    }
}

TEST_CASE("oracle limits are enforced") {
    Instance fig1 = testing::fig1_instance();  // 4 shared windows
    CHECK_THROWS_AS((void)brute_force_optimum(fig1), std::invalid_argument);

    Instance big = testing::fig1_instance();
    big.vessels.push_back({"V3", "PO", 6.0, 500, 2.0, 3.0, 14.0, std::nullopt});
    big.contracts.push_back({"C3", "V3", "PD", 100, 10.0, {}, 1.0, 300.0});
    big.finalize();
    CHECK_THROWS_AS((void)brute_force_optimum(big), std::invalid_argument);
}

TEST_CASE("reporting gap reproduces the published arithmetic") {
    CHECK(100.0 * reporting_gap(1414, 1397) == doctest::Approx(1.2).epsilon(0.1));
    CHECK(100.0 * reporting_gap(1404, 1271) == doctest::Approx(9.5).epsilon(0.1));
    CHECK(100.0 * reporting_gap(2634, 2890) == doctest::Approx(-9.8).epsilon(0.02));
}

TEST_CASE("fleet stats aggregate docks, capacity use and satisfaction") {
    Instance inst = testing::fig1_instance();
    Schedule s = idle_fleet_schedule(inst);
    Docking d;
    d.window = 0;
    d.arrive_h = 10.0;
    d.loads[0] = 250.0;
    s.vessels[0].dockings.push_back(d);
    s.vessels[0].arrive_dest_h = 10.0 + 12.5 + 10.0;
    s.shortfall[0] = 150.0;
    FleetStats stats = fleet_stats(inst, s);
    CHECK(stats.avg_docks == doctest::Approx(0.5));
    CHECK(stats.max_docks == 1);
    CHECK(stats.avg_used_capacity == doctest::Approx(0.25));  // (250/500 + 0)/2
    CHECK(stats.cargo_satisfied == doctest::Approx(250.0 / 800.0));
}

#include <doctest.h>

#include "shipsched/instance.hpp"

#include "helpers.hpp"

using namespace shipsched;

TEST_CASE("load resolves references and derives the horizon") {
    std::string text = R"({
      "berths": [{"id": "B1", "max_draft_m": 9.0, "port": "PT"}],
      "contracts": [{"compensation_per_pallet": 1, "destination_port": "PD",
                     "due_date_h": 120, "id": "C1", "income_per_pallet": 10,
                     "size_pallets": 50, "vessel": "V1"}],
      "draft_per_pallet_m": 0.01,
      "ports": ["PD", "PO", "PT"],
      "sailing_hours": [[0, 18, 10], [18, 0, 10], [10, 10, 0]],
      "vessels": [{"capacity_pallets": 60, "fuel_rate": 2, "id": "V1",
                   "light_draft_m": 6, "origin_port": "PO", "rent_rate": 1,
                   "speed_knots": 14}],
      "windows": [{"berth": "B1", "fee": 20, "id": "W1",
                   "load_time_per_pallet_h": 0.1, "lower_h": 0, "upper_h": 48}]
    })";
    Instance inst = load_instance(text);
    CHECK(inst.horizon_h == 120.0);
    CHECK(inst.vessel_contracts(0) == std::vector<int>{0});
    CHECK(inst.vessel_windows(0) == std::vector<int>{0});
    CHECK(inst.vessel_destination_port(0) == inst.port_index("PD"));
}

TEST_CASE("unresolved vessel reference is a load error") {
    std::string text = R"({
      "berths": [{"id": "B1", "max_draft_m": 9.0, "port": "PT"}],
      "contracts": [{"compensation_per_pallet": 1, "destination_port": "PD",
                     "due_date_h": 120, "id": "C1", "income_per_pallet": 10,
                     "size_pallets": 50, "vessel": "V9"}],
      "draft_per_pallet_m": 0.01,
      "ports": ["PD", "PO", "PT"],
      "sailing_hours": [[0, 18, 10], [18, 0, 10], [10, 10, 0]],
      "vessels": [{"capacity_pallets": 60, "fuel_rate": 2, "id": "V1",
                   "light_draft_m": 6, "origin_port": "PO", "rent_rate": 1,
                   "speed_knots": 14}],
      "windows": [{"berth": "B1", "fee": 20, "id": "W1",
                   "load_time_per_pallet_h": 0.1, "lower_h": 0, "upper_h": 48}]
    })";
    CHECK_THROWS_WITH_AS(load_instance(text),
                         doctest::Contains("unresolved vessel id"), ParseError);
}

TEST_CASE("malformed JSON reports a parse error") {
    CHECK_THROWS_AS(load_instance("{ nope"), ParseError);
}

TEST_CASE("save(load(text)) is byte-identical on canonical input") {
    Instance inst = testing::desk_instance();
    std::string canonical = save_instance(inst);
    Instance reloaded = load_instance(canonical);
    CHECK(reloaded == inst);
    CHECK(save_instance(reloaded) == canonical);
}

TEST_CASE("load sorts entities and ports into canonical order") {
    // Same instance, scrambled entity order and port order.
    std::string text = R"({
      "berths": [{"id": "B1", "max_draft_m": 8.0, "port": "PT"}],
      "contracts": [{"compensation_per_pallet": 1, "destination_port": "PD",
                     "due_date_h": 200, "id": "C1", "income_per_pallet": 10,
                     "size_pallets": 100, "vessel": "V1"}],
      "draft_per_pallet_m": 0.02,
      "ports": ["PT", "PO", "PD"],
      "sailing_hours": [[0, 10, 10], [10, 0, 18], [10, 18, 0]],
      "vessels": [{"capacity_pallets": 200, "fuel_rate": 3, "id": "V1",
                   "light_draft_m": 5, "origin_port": "PO", "rent_rate": 2,
                   "speed_knots": 14}],
      "windows": [{"berth": "B1", "fee": 50, "id": "W1",
                   "load_time_per_pallet_h": 0.1, "lower_h": 0, "upper_h": 100}]
    })";
    Instance inst = load_instance(text);
    CHECK(inst == testing::desk_instance());
    CHECK(save_instance(inst) == save_instance(testing::desk_instance()));
}

TEST_CASE("round-trip preserves overrides and accessibility") {
    Instance inst = testing::fig1_instance();
    inst.vessels[0].accessible_windows = std::vector<std::string>{"W1", "W2", "W3"};
    inst.contracts[0].income_overrides["W2"] = 12.5;
    inst.windows[1].fee_overrides["V2"] = 75.0;
    inst.finalize();
    Instance reloaded = load_instance(save_instance(inst));
    CHECK(reloaded == inst);
    CHECK(reloaded.vessel_windows(0) == std::vector<int>{0, 1, 2});
    CHECK(reloaded.income_per_pallet(0, 1) == 12.5);
    CHECK(reloaded.income_per_pallet(0, 0) == 10.0);
    CHECK(reloaded.window_fee(1, 1) == 75.0);
    CHECK(reloaded.window_fee(1, 0) == 40.0);
}

TEST_CASE("validate_instance flags the spec'd violations") {
    SUBCASE("well-formed instance has none") {
        CHECK(validate_instance(testing::fig1_instance()).empty());
        CHECK(validate_instance(testing::desk_instance()).empty());
    }
    SUBCASE("empty time window") {
        Instance inst = testing::desk_instance();
        inst.windows[0].lower_h = 10.0;
        inst.windows[0].upper_h = 10.0;
        inst.finalize();
        auto violations = validate_instance(inst);
        REQUIRE(violations.size() == 1);
        CHECK(violations[0].rule == "empty time window");
        CHECK(violations[0].entity == "W1");
    }
    SUBCASE("capacity below assigned cargo") {
        Instance inst = testing::desk_instance();
        inst.vessels[0].capacity_pallets = 99;
        inst.finalize();
        auto violations = validate_instance(inst);
        REQUIRE(violations.size() == 1);
        CHECK(violations[0].rule == "capacity below assigned cargo");
    }
    SUBCASE("overlapping same-berth windows") {
        Instance inst = testing::fig1_instance();
        inst.windows[1].lower_h = 30.0;  // W2 now overlaps W1 = [0, 40]
        inst.finalize();
        auto violations = validate_instance(inst);
        REQUIRE(violations.size() == 1);
        CHECK(violations[0].rule == "overlapping windows");
    }
    SUBCASE("asymmetric sailing matrix") {
        Instance inst = testing::desk_instance();
        inst.sailing_hours[0][1] = 19.0;
        auto violations = validate_instance(inst);
        REQUIRE(violations.size() == 1);
        CHECK(violations[0].rule == "symmetric sailing matrix");
    }
}

TEST_CASE("draft cap clamps at zero") {
    Instance inst = testing::desk_instance();
    // berth depth 8, light draft 5
    CHECK(vessel_window_draft_cap(inst, 0, 0) == 3.0);
    inst.vessels[0].light_draft_m = 8.0;
    CHECK(vessel_window_draft_cap(inst, 0, 0) == 0.0);
    inst.vessels[0].light_draft_m = 9.0;
    CHECK(vessel_window_draft_cap(inst, 0, 0) == 0.0);
}

TEST_CASE("draft cap is nonincreasing in light draft") {
    Instance inst = testing::desk_instance();
    double previous = 1e18;
    for (double light = 1.0; light < 12.0; light += 0.5) {
        inst.vessels[0].light_draft_m = light;
        double cap = vessel_window_draft_cap(inst, 0, 0);
        CHECK(cap <= previous);
        previous = cap;
    }
}

TEST_CASE("horizon equals the max due date exactly") {
    Instance inst = testing::fig1_instance();
    inst.contracts[1].due_date_h = 512.25;
    inst.finalize();
    CHECK(inst.horizon_h == 512.25);
}

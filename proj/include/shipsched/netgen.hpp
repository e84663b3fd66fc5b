#pragma once

#include <cstdint>
#include <string>

#include "shipsched/instance.hpp"

namespace shipsched {

/// Shape of a synthetic experiment family, e.g. S4B5W2C18 with a pallet
/// total. The identifier string carries every count except the pallets.
struct FamilySpec {
    int vessels = 0;
    int berths = 0;
    int windows_per_berth = 0;
    int contracts = 0;
    std::int64_t total_pallets = 0;
    std::uint64_t seed = 1;
};

/// Tunable value ranges for the generator. The company's real magnitudes
/// are confidential, so these defaults are chosen to keep both partial
/// fulfillment and multiple docking active at desk scale.
struct GenParams {
    double leg_min_h = 4.0, leg_max_h = 48.0;          // port-to-port legs
    double bandwidth_min_h = 8.0, bandwidth_max_h = 72.0;
    double gap_min_h = 4.0, gap_max_h = 24.0;          // idle gap between windows
    double full_load_frac_min = 0.10, full_load_frac_max = 0.60;  // of a bandwidth
    double income_min = 8.0, income_max = 14.0;        // per pallet
    double compensation_min = 1.0, compensation_max = 6.0;
    double fee_min = 50.0, fee_max = 400.0;
    double rent_min = 20.0, rent_max = 60.0;           // per hour
    double fuel_min = 30.0, fuel_max = 90.0;           // per sailing hour
    double light_draft_min_m = 5.0, light_draft_max_m = 8.0;
    double berth_depth_min_m = 5.5, berth_depth_max_m = 13.0;
    double capacity_slack_min = 1.05, capacity_slack_max = 1.35;
    double due_slack_min = 0.2, due_slack_max = 0.8;   // fraction of earliest completion
};

/// Parse an identifier like "S12B10W3C54" into counts.
FamilySpec family_from_name(const std::string& name, std::int64_t total_pallets,
                            std::uint64_t seed);

/// Map the paper's seed letters A-D to 1-4; digits pass through.
std::uint64_t seed_from_token(const std::string& token);

/// Deterministic, seeded instance synthesis. The pallet total is hit
/// exactly (largest-remainder apportionment); contracts are assigned
/// round-robin to vessels; same-berth windows never overlap; every
/// output passes validate_instance with zero violations.
Instance generate(const FamilySpec& spec, const GenParams& params = {});

}  // namespace shipsched

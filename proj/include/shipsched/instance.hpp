#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace shipsched {

/// Thrown on malformed instance documents (bad JSON, unknown schema
/// fields, dangling id references, invariant violations at load).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct VesselSpec {
    std::string id;
    std::string origin_port;
    double light_draft_m = 0.0;       // draft with no cargo aboard
    std::int64_t capacity_pallets = 0;
    double rent_rate = 0.0;           // money per hour of trip duration
    double fuel_rate = 0.0;           // money per hour of sailing
    double speed_knots = 0.0;         // metadata; legs are given in hours
    // Empty means every window is reachable by this vessel.
    std::optional<std::vector<std::string>> accessible_windows;

    bool operator==(const VesselSpec&) const = default;
};

struct ContractSpec {
    std::string id;
    std::string vessel;               // pre-assigned carrier
    std::string destination_port;
    std::int64_t size_pallets = 0;
    double income_per_pallet = 0.0;
    // Optional per-window income override, keyed by window id.
    std::map<std::string, double> income_overrides;
    double compensation_per_pallet = 0.0;  // paid per pallet left ashore
    double due_date_h = 0.0;

    bool operator==(const ContractSpec&) const = default;
};

struct BerthSpec {
    std::string id;
    std::string port;
    double max_draft_m = 0.0;

    bool operator==(const BerthSpec&) const = default;
};

struct TimeWindowSpec {
    std::string id;
    std::string berth;
    double lower_h = 0.0;
    double upper_h = 0.0;
    double fee = 0.0;                 // docking fee, uniform across vessels
    std::map<std::string, double> fee_overrides;  // per-vessel override
    double load_time_per_pallet_h = 0.0;

    double bandwidth_h() const { return upper_h - lower_h; }
    bool operator==(const TimeWindowSpec&) const = default;
};

/// One structural problem found by validate_instance. Violations are
/// data, not errors; an empty list means the instance is well-formed.
struct Violation {
    std::string entity;   // id of the offending entity ("" for global)
    std::string rule;     // short machine-readable rule name
    std::string detail;   // human-readable explanation
};

class Instance {
public:
    std::vector<VesselSpec> vessels;
    std::vector<ContractSpec> contracts;
    std::vector<BerthSpec> berths;
    std::vector<TimeWindowSpec> windows;
    std::vector<std::string> ports;
    // Symmetric port-to-port sailing times in hours, aligned with `ports`.
    std::vector<std::vector<double>> sailing_hours;
    double draft_per_pallet_m = 0.0;
    double horizon_h = 0.0;           // derived: max contract due date

    // --- index lookups (built by finalize) ---
    int vessel_index(const std::string& id) const { return lookup(vessel_by_id_, id); }
    int contract_index(const std::string& id) const { return lookup(contract_by_id_, id); }
    int berth_index(const std::string& id) const { return lookup(berth_by_id_, id); }
    int window_index(const std::string& id) const { return lookup(window_by_id_, id); }
    int port_index(const std::string& id) const { return lookup(port_by_id_, id); }

    /// Contract indices pre-assigned to vessel v (ascending).
    const std::vector<int>& vessel_contracts(int v) const { return contracts_of_vessel_[v]; }
    /// Window indices vessel v may use (ascending). Honors accessible_windows.
    const std::vector<int>& vessel_windows(int v) const { return windows_of_vessel_[v]; }

    double sail_hours(int port_a, int port_b) const { return sailing_hours[port_a][port_b]; }
    /// Destination port index of vessel v (all its contracts share it).
    int vessel_destination_port(int v) const { return destination_port_of_vessel_[v]; }
    int origin_port_of(int v) const { return port_index(vessels[v].origin_port); }
    int berth_port_of_window(int w) const {
        return port_index(berths[berth_index(windows[w].berth)].port);
    }

    double income_per_pallet(int contract, int window) const {
        const auto& c = contracts[contract];
        auto it = c.income_overrides.find(windows[window].id);
        return it == c.income_overrides.end() ? c.income_per_pallet : it->second;
    }
    double window_fee(int window, int vessel) const {
        const auto& w = windows[window];
        auto it = w.fee_overrides.find(vessels[vessel].id);
        return it == w.fee_overrides.end() ? w.fee : it->second;
    }

    /// Sum of pallet sizes pre-assigned to vessel v.
    std::int64_t assigned_pallets(int v) const;

    /// Rebuild index maps and the derived horizon. Throws ParseError on
    /// dangling id references; everything else is left to validate_instance.
    void finalize();

    bool operator==(const Instance& other) const;

private:
    static int lookup(const std::map<std::string, int>& m, const std::string& id) {
        auto it = m.find(id);
        if (it == m.end()) throw ParseError("unresolved id: " + id);
        return it->second;
    }

    std::map<std::string, int> vessel_by_id_, contract_by_id_, berth_by_id_,
        window_by_id_, port_by_id_;
    std::vector<std::vector<int>> contracts_of_vessel_;
    std::vector<std::vector<int>> windows_of_vessel_;
    std::vector<int> destination_port_of_vessel_;
};

/// Allowable draft increase of `vessel` at `window`'s berth:
/// max(0, berth depth - light draft).
double vessel_window_draft_cap(const Instance& inst, int vessel, int window);

/// Parse an instance document. Loading is strict: dangling references and
/// invariant violations raise ParseError naming the field/entity.
Instance load_instance(const std::string& text);
Instance load_instance_file(const std::string& path);

/// Canonical serialization: keys sorted, entity lists sorted by id,
/// numbers with up to 9 significant digits. save(load(t)) is the
/// canonical form of t, byte for byte.
std::string save_instance(const Instance& inst);
void save_instance_file(const Instance& inst, const std::string& path);

/// Structural validation. Empty result iff every type invariant holds.
std::vector<Violation> validate_instance(const Instance& inst);

}  // namespace shipsched

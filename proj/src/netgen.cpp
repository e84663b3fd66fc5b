#include "shipsched/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <regex>
#include <stdexcept>

namespace shipsched {

namespace {

// All generated values live on decimal grids so the canonical 9-digit
// serialization round-trips bit-exactly.
double quantize(double x, int decimals) {
    double scale = std::pow(10.0, decimals);
    return std::round(x * scale) / scale;
}

std::string padded(const std::string& prefix, int i, int width = 2) {
    std::string n = std::to_string(i);
    while (static_cast<int>(n.size()) < width) n.insert(n.begin(), '0');
    return prefix + n;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(eng_);
    }
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(eng_);
    }

private:
    std::mt19937_64 eng_;
};

// Largest-remainder apportionment of `total` over random weights, each
// share at least 1. Exact by construction.
std::vector<std::int64_t> apportion(std::int64_t total, int parts, Rng& rng) {
    std::vector<double> weights(parts);
    for (auto& w : weights) w = rng.uniform(0.5, 1.5);
    double wsum = std::accumulate(weights.begin(), weights.end(), 0.0);

    std::int64_t spread = total - parts;  // one pallet is reserved per part
    std::vector<std::int64_t> shares(parts);
    std::vector<std::pair<double, int>> remainders(parts);
    std::int64_t used = 0;
    for (int i = 0; i < parts; ++i) {
        double exact = spread * weights[i] / wsum;
        shares[i] = static_cast<std::int64_t>(std::floor(exact));
        remainders[i] = {exact - std::floor(exact), i};
        used += shares[i];
    }
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (std::int64_t k = 0; k < spread - used; ++k) shares[remainders[k].second]++;
    for (auto& s : shares) s += 1;
    return shares;
}

}  // namespace

std::uint64_t seed_from_token(const std::string& token) {
    if (token.size() == 1 && token[0] >= 'A' && token[0] <= 'Z')
        return static_cast<std::uint64_t>(token[0] - 'A' + 1);
    try {
        size_t pos = 0;
        std::uint64_t v = std::stoull(token, &pos);
        if (pos == token.size()) return v;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("seed must be an integer or a letter A-Z: " + token);
}

FamilySpec family_from_name(const std::string& name, std::int64_t total_pallets,
                            std::uint64_t seed) {
    static const std::regex pattern(R"(^S(\d+)B(\d+)W(\d+)C(\d+)$)");
    std::smatch m;
    if (!std::regex_match(name, m, pattern))
        throw std::invalid_argument("malformed family name (want S#B#W#C#): " + name);
    FamilySpec spec;
    spec.vessels = std::stoi(m[1]);
    spec.berths = std::stoi(m[2]);
    spec.windows_per_berth = std::stoi(m[3]);
    spec.contracts = std::stoi(m[4]);
    spec.total_pallets = total_pallets;
    spec.seed = seed;
    return spec;
}

Instance generate(const FamilySpec& spec, const GenParams& p) {
    if (spec.vessels <= 0 || spec.berths <= 0 || spec.windows_per_berth <= 0 ||
        spec.contracts <= 0)
        throw std::invalid_argument("family counts must all be positive");
    if (spec.contracts < spec.vessels)
        throw std::invalid_argument("need contracts >= vessels for round-robin assignment");
    if (spec.total_pallets < spec.contracts)
        throw std::invalid_argument("total_pallets below one pallet per contract");

    Rng rng(spec.seed);
    Instance inst;

    // Port layout: a few shared origin and destination ports plus one
    // terminal port per two berths.
    int n_origalong = std::min(3, spec.vessels);
    int n_dest = std::min(3, spec.vessels);
    int n_terminal = (spec.berths + 1) / 2;
    std::vector<std::string> origin_ports, terminal_ports, dest_ports;
    for (int i = 1; i <= n_origalong; ++i) origin_ports.push_back(padded("PO", i));
    for (int i = 1; i <= n_terminal; ++i) terminal_ports.push_back(padded("PT", i));
    for (int i = 1; i <= n_dest; ++i) dest_ports.push_back(padded("PD", i));
    for (const auto& g : {origin_ports, terminal_ports, dest_ports})
        for (const auto& id : g) inst.ports.push_back(id);
    std::sort(inst.ports.begin(), inst.ports.end());
    int nports = static_cast<int>(inst.ports.size());

    // Sailing legs in integer centihours, closed under shortest paths so
    // detours through idle berths never beat a direct leg.
    std::vector<std::vector<std::int64_t>> leg(nports, std::vector<std::int64_t>(nports, 0));
    auto lo = static_cast<std::int64_t>(std::llround(p.leg_min_h * 100));
    auto hi = static_cast<std::int64_t>(std::llround(p.leg_max_h * 100));
    for (int i = 0; i < nports; ++i)
        for (int j = i + 1; j < nports; ++j) leg[i][j] = leg[j][i] = rng.uniform_int(lo, hi);
    for (int k = 0; k < nports; ++k)
        for (int i = 0; i < nports; ++i)
            for (int j = 0; j < nports; ++j)
                leg[i][j] = std::min(leg[i][j], leg[i][k] + leg[k][j]);
    inst.sailing_hours.assign(nports, std::vector<double>(nports, 0.0));
    for (int i = 0; i < nports; ++i)
        for (int j = 0; j < nports; ++j) inst.sailing_hours[i][j] = leg[i][j] / 100.0;

    // Berths and their windows.
    for (int b = 1; b <= spec.berths; ++b) {
        BerthSpec berth;
        berth.id = padded("B", b);
        berth.port = terminal_ports[(b - 1) % n_terminal];
        berth.max_draft_m = quantize(rng.uniform(p.berth_depth_min_m, p.berth_depth_max_m), 1);
        inst.berths.push_back(berth);
    }

    // Cargo sizes: exact largest-remainder split of the pallet total.
    auto sizes = apportion(spec.total_pallets, spec.contracts, rng);

    // Vessels with round-robin contracts; capacity always covers the
    // assigned cargo.
    std::vector<std::int64_t> assigned(spec.vessels, 0);
    for (int c = 0; c < spec.contracts; ++c) assigned[c % spec.vessels] += sizes[c];
    std::int64_t max_assigned = *std::max_element(assigned.begin(), assigned.end());

    for (int v = 0; v < spec.vessels; ++v) {
        VesselSpec vessel;
        vessel.id = padded("V", v + 1);
        vessel.origin_port = origin_ports[v % n_origalong];
        vessel.light_draft_m = quantize(rng.uniform(p.light_draft_min_m, p.light_draft_max_m), 1);
        vessel.capacity_pallets = static_cast<std::int64_t>(
            std::ceil(assigned[v] * rng.uniform(p.capacity_slack_min, p.capacity_slack_max)));
        vessel.rent_rate = quantize(rng.uniform(p.rent_min, p.rent_max), 2);
        vessel.fuel_rate = quantize(rng.uniform(p.fuel_min, p.fuel_max), 2);
        vessel.speed_knots = quantize(rng.uniform(10.0, 20.0), 1);
        inst.vessels.push_back(vessel);
    }

    // Draft: a full cargo load should roughly exhaust the headroom of a
    // midsized berth, so the draft cap stays an active constraint.
    inst.draft_per_pallet_m = std::max(1e-7, quantize(4.0 / double(max_assigned), 7));

    // Windows: consecutive, non-overlapping, integer-hour bounds.
    for (int b = 0; b < spec.berths; ++b) {
        std::int64_t cursor = rng.uniform_int(0, 24);
        for (int k = 1; k <= spec.windows_per_berth; ++k) {
            TimeWindowSpec w;
            w.id = inst.berths[b].id + "W" + std::to_string(k);
            w.berth = inst.berths[b].id;
            std::int64_t bw = rng.uniform_int(static_cast<std::int64_t>(p.bandwidth_min_h),
                                              static_cast<std::int64_t>(p.bandwidth_max_h));
            w.lower_h = static_cast<double>(cursor);
            w.upper_h = static_cast<double>(cursor + bw);
            cursor += bw + rng.uniform_int(static_cast<std::int64_t>(p.gap_min_h),
                                           static_cast<std::int64_t>(p.gap_max_h));
            w.fee = static_cast<double>(rng.uniform_int(static_cast<std::int64_t>(p.fee_min),
                                                        static_cast<std::int64_t>(p.fee_max)));
            double frac = rng.uniform(p.full_load_frac_min, p.full_load_frac_max);
            w.load_time_per_pallet_h =
                std::max(1e-7, quantize(frac * bw / double(max_assigned), 7));
            inst.windows.push_back(w);
        }
    }

    // Contracts: destination fixed per vessel, due dates beyond the
    // earliest full-service completion through the best single window.
    std::vector<std::string> vessel_dest(spec.vessels);
    for (int v = 0; v < spec.vessels; ++v) vessel_dest[v] = dest_ports[v % n_dest];

    inst.finalize();  // builds port indices needed below

    std::vector<double> earliest_done(spec.vessels, 0.0);
    for (int v = 0; v < spec.vessels; ++v) {
        int op = inst.port_index(inst.vessels[v].origin_port);
        int dp = inst.port_index(vessel_dest[v]);
        double best = inst.sail_hours(op, dp);
        for (const auto& w : inst.windows) {
            int bp = inst.port_index(inst.berths[inst.berth_index(w.berth)].port);
            double arrive = std::max(inst.sail_hours(op, bp), w.lower_h);
            double load = w.load_time_per_pallet_h * double(assigned[v]);
            best = std::max(best, arrive + load + inst.sail_hours(bp, dp));
        }
        earliest_done[v] = best;
    }

    for (int c = 0; c < spec.contracts; ++c) {
        ContractSpec contract;
        contract.id = padded("C", c + 1);
        int v = c % spec.vessels;
        contract.vessel = inst.vessels[v].id;
        contract.destination_port = vessel_dest[v];
        contract.size_pallets = sizes[c];
        contract.income_per_pallet = quantize(rng.uniform(p.income_min, p.income_max), 2);
        contract.compensation_per_pallet =
            quantize(rng.uniform(p.compensation_min, p.compensation_max), 2);
        double slack = rng.uniform(p.due_slack_min, p.due_slack_max);
        contract.due_date_h =
            std::ceil(earliest_done[v] * (1.0 + slack)) + rng.uniform_int(0, 48);
        inst.contracts.push_back(contract);
    }

    std::sort(inst.contracts.begin(), inst.contracts.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    inst.finalize();
    return inst;
}

}  // namespace shipsched

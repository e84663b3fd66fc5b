#include "shipsched/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace shipsched {

using nlohmann::json;

namespace {

// Canonical number form: integers plain, everything else %.9g.
std::string canon_number(double x) {
    char buf[64];
    if (std::isfinite(x) && x == std::floor(x) && std::fabs(x) < 1e15) {
        std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(x));
    } else {
        std::snprintf(buf, sizeof(buf), "%.9g", x);
    }
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
    return out;
}

// Tiny writer for the fixed instance schema; emits 2-space indents and
// keys in the exact (already lexicographic) order the callers use.
class Writer {
public:
    std::string str() const { return out_; }

    void begin_object() { open('{'); }
    void end_object() { close('}'); }
    void begin_array() { open('['); }
    void end_array() { close(']'); }

    void key(const std::string& k) {
        separate();
        indent();
        out_ += json_escape(k);
        out_ += ": ";
        pending_value_ = true;
    }
    void value_string(const std::string& v) { atom(json_escape(v)); }
    void value_number(double v) { atom(canon_number(v)); }
    void value_int(std::int64_t v) { atom(std::to_string(v)); }

private:
    void open(char c) {
        if (!pending_value_) { separate(); indent(); }
        pending_value_ = false;
        out_ += c;
        depth_++;
        first_.push_back(true);
    }
    void close(char c) {
        depth_--;
        bool empty = first_.back();
        first_.pop_back();
        if (!empty) { out_ += '\n'; indent(); }
        out_ += c;
        mark_item();
    }
    void atom(const std::string& text) {
        if (!pending_value_) { separate(); indent(); }
        pending_value_ = false;
        out_ += text;
        mark_item();
    }
    void separate() {
        if (!first_.empty()) {
            if (!first_.back()) out_ += ',';
            out_ += '\n';
        }
    }
    void indent() { out_.append(2 * depth_, ' '); }
    void mark_item() {
        if (!first_.empty()) first_.back() = false;
    }

    std::string out_;
    int depth_ = 0;
    bool pending_value_ = false;
    std::vector<bool> first_;
};

double get_number(const json& j, const std::string& path, const char* field) {
    auto it = j.find(field);
    if (it == j.end() || !it->is_number())
        throw ParseError(path + "." + field + ": expected a number");
    return it->get<double>();
}

std::int64_t get_count(const json& j, const std::string& path, const char* field) {
    auto it = j.find(field);
    if (it == j.end() || !it->is_number_integer())
        throw ParseError(path + "." + field + ": expected an integer");
    return it->get<std::int64_t>();
}

std::string get_string(const json& j, const std::string& path, const char* field) {
    auto it = j.find(field);
    if (it == j.end() || !it->is_string())
        throw ParseError(path + "." + field + ": expected a string");
    return it->get<std::string>();
}

std::map<std::string, double> get_override_map(const json& j, const std::string& path,
                                               const char* field) {
    std::map<std::string, double> out;
    auto it = j.find(field);
    if (it == j.end()) return out;
    if (!it->is_object()) throw ParseError(path + "." + field + ": expected an object");
    for (auto& [k, v] : it->items()) {
        if (!v.is_number()) throw ParseError(path + "." + field + "." + k + ": expected a number");
        out[k] = v.get<double>();
    }
    return out;
}

}  // namespace

std::int64_t Instance::assigned_pallets(int v) const {
    std::int64_t total = 0;
    for (int c : contracts_of_vessel_[v]) total += contracts[c].size_pallets;
    return total;
}

void Instance::finalize() {
    vessel_by_id_.clear();
    contract_by_id_.clear();
    berth_by_id_.clear();
    window_by_id_.clear();
    port_by_id_.clear();

    auto index_all = [](auto& entities, std::map<std::string, int>& m, const char* what) {
        for (int i = 0; i < static_cast<int>(entities.size()); ++i) {
            if (!m.emplace(entities[i].id, i).second)
                throw ParseError(std::string("duplicate ") + what + " id: " + entities[i].id);
        }
    };
    index_all(vessels, vessel_by_id_, "vessel");
    index_all(contracts, contract_by_id_, "contract");
    index_all(berths, berth_by_id_, "berth");
    index_all(windows, window_by_id_, "window");
    for (int i = 0; i < static_cast<int>(ports.size()); ++i) {
        if (!port_by_id_.emplace(ports[i], i).second)
            throw ParseError("duplicate port id: " + ports[i]);
    }

    auto need = [&](const std::map<std::string, int>& m, const std::string& id,
                    const std::string& where, const char* what) {
        auto it = m.find(id);
        if (it == m.end())
            throw ParseError(where + ": unresolved " + what + " id \"" + id + "\"");
        return it->second;
    };

    for (const auto& v : vessels) need(port_by_id_, v.origin_port, "vessel " + v.id, "port");
    for (const auto& b : berths) need(port_by_id_, b.port, "berth " + b.id, "port");
    for (const auto& w : windows) need(berth_by_id_, w.berth, "window " + w.id, "berth");

    contracts_of_vessel_.assign(vessels.size(), {});
    destination_port_of_vessel_.assign(vessels.size(), -1);
    for (int c = 0; c < static_cast<int>(contracts.size()); ++c) {
        const auto& spec = contracts[c];
        int v = need(vessel_by_id_, spec.vessel, "contract " + spec.id, "vessel");
        int dest = need(port_by_id_, spec.destination_port, "contract " + spec.id, "port");
        contracts_of_vessel_[v].push_back(c);
        if (destination_port_of_vessel_[v] < 0) destination_port_of_vessel_[v] = dest;
        for (const auto& [wid, unused] : spec.income_overrides)
            need(window_by_id_, wid, "contract " + spec.id + " income_overrides", "window");
    }
    for (const auto& w : windows)
        for (const auto& [vid, unused] : w.fee_overrides)
            need(vessel_by_id_, vid, "window " + w.id + " fee_overrides", "vessel");

    windows_of_vessel_.assign(vessels.size(), {});
    for (int v = 0; v < static_cast<int>(vessels.size()); ++v) {
        if (vessels[v].accessible_windows) {
            for (const auto& wid : *vessels[v].accessible_windows)
                windows_of_vessel_[v].push_back(
                    need(window_by_id_, wid, "vessel " + vessels[v].id + " accessible_windows",
                         "window"));
            std::sort(windows_of_vessel_[v].begin(), windows_of_vessel_[v].end());
            windows_of_vessel_[v].erase(
                std::unique(windows_of_vessel_[v].begin(), windows_of_vessel_[v].end()),
                windows_of_vessel_[v].end());
        } else {
            windows_of_vessel_[v].resize(windows.size());
            for (int w = 0; w < static_cast<int>(windows.size()); ++w)
                windows_of_vessel_[v][w] = w;
        }
    }

    horizon_h = 0.0;
    for (const auto& c : contracts) horizon_h = std::max(horizon_h, c.due_date_h);
}

bool Instance::operator==(const Instance& other) const {
    return vessels == other.vessels && contracts == other.contracts &&
           berths == other.berths && windows == other.windows && ports == other.ports &&
           sailing_hours == other.sailing_hours &&
           draft_per_pallet_m == other.draft_per_pallet_m;
}

double vessel_window_draft_cap(const Instance& inst, int vessel, int window) {
    const auto& berth = inst.berths[inst.berth_index(inst.windows[window].berth)];
    return std::max(0.0, berth.max_draft_m - inst.vessels[vessel].light_draft_m);
}

Instance load_instance(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("instance document: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("instance document: top level must be an object");

    Instance inst;
    for (const char* required :
         {"berths", "contracts", "draft_per_pallet_m", "ports", "sailing_hours", "vessels",
          "windows"}) {
        if (!doc.contains(required))
            throw ParseError(std::string("instance document: missing key \"") + required + "\"");
    }

    const json& jports = doc["ports"];
    if (!jports.is_array()) throw ParseError("ports: expected an array");
    for (const auto& p : jports) {
        if (!p.is_string()) throw ParseError("ports: expected strings");
        inst.ports.push_back(p.get<std::string>());
    }

    const json& jv = doc["vessels"];
    if (!jv.is_array()) throw ParseError("vessels: expected an array");
    for (size_t i = 0; i < jv.size(); ++i) {
        std::string path = "vessels[" + std::to_string(i) + "]";
        const json& j = jv[i];
        VesselSpec v;
        v.id = get_string(j, path, "id");
        v.origin_port = get_string(j, path, "origin_port");
        v.light_draft_m = get_number(j, path, "light_draft_m");
        v.capacity_pallets = get_count(j, path, "capacity_pallets");
        v.rent_rate = get_number(j, path, "rent_rate");
        v.fuel_rate = get_number(j, path, "fuel_rate");
        v.speed_knots = get_number(j, path, "speed_knots");
        if (j.contains("accessible_windows")) {
            const json& aw = j["accessible_windows"];
            if (!aw.is_array()) throw ParseError(path + ".accessible_windows: expected an array");
            std::vector<std::string> ids;
            for (const auto& w : aw) ids.push_back(w.get<std::string>());
            v.accessible_windows = std::move(ids);
        }
        inst.vessels.push_back(std::move(v));
    }

    const json& jc = doc["contracts"];
    if (!jc.is_array()) throw ParseError("contracts: expected an array");
    for (size_t i = 0; i < jc.size(); ++i) {
        std::string path = "contracts[" + std::to_string(i) + "]";
        const json& j = jc[i];
        ContractSpec c;
        c.id = get_string(j, path, "id");
        c.vessel = get_string(j, path, "vessel");
        c.destination_port = get_string(j, path, "destination_port");
        c.size_pallets = get_count(j, path, "size_pallets");
        c.income_per_pallet = get_number(j, path, "income_per_pallet");
        c.income_overrides = get_override_map(j, path, "income_overrides");
        c.compensation_per_pallet = get_number(j, path, "compensation_per_pallet");
        c.due_date_h = get_number(j, path, "due_date_h");
        inst.contracts.push_back(std::move(c));
    }

    const json& jb = doc["berths"];
    if (!jb.is_array()) throw ParseError("berths: expected an array");
    for (size_t i = 0; i < jb.size(); ++i) {
        std::string path = "berths[" + std::to_string(i) + "]";
        const json& j = jb[i];
        BerthSpec b;
        b.id = get_string(j, path, "id");
        b.port = get_string(j, path, "port");
        b.max_draft_m = get_number(j, path, "max_draft_m");
        inst.berths.push_back(std::move(b));
    }

    const json& jw = doc["windows"];
    if (!jw.is_array()) throw ParseError("windows: expected an array");
    for (size_t i = 0; i < jw.size(); ++i) {
        std::string path = "windows[" + std::to_string(i) + "]";
        const json& j = jw[i];
        TimeWindowSpec w;
        w.id = get_string(j, path, "id");
        w.berth = get_string(j, path, "berth");
        w.lower_h = get_number(j, path, "lower_h");
        w.upper_h = get_number(j, path, "upper_h");
        w.fee = get_number(j, path, "fee");
        w.fee_overrides = get_override_map(j, path, "fee_overrides");
        w.load_time_per_pallet_h = get_number(j, path, "load_time_per_pallet_h");
        inst.windows.push_back(std::move(w));
    }

    const json& jm = doc["sailing_hours"];
    if (!jm.is_array() || jm.size() != inst.ports.size())
        throw ParseError("sailing_hours: expected a ports x ports matrix");
    for (size_t i = 0; i < jm.size(); ++i) {
        if (!jm[i].is_array() || jm[i].size() != inst.ports.size())
            throw ParseError("sailing_hours[" + std::to_string(i) + "]: wrong row length");
        std::vector<double> row;
        for (const auto& x : jm[i]) {
            if (!x.is_number()) throw ParseError("sailing_hours: expected numbers");
            row.push_back(x.get<double>());
        }
        inst.sailing_hours.push_back(std::move(row));
    }

    if (!doc["draft_per_pallet_m"].is_number())
        throw ParseError("draft_per_pallet_m: expected a number");
    inst.draft_per_pallet_m = doc["draft_per_pallet_m"].get<double>();

    // Canonical order is part of the data model: sort entities by id and
    // ports lexicographically, remapping the sailing matrix.
    std::vector<std::string> sorted_ports = inst.ports;
    std::sort(sorted_ports.begin(), sorted_ports.end());
    if (sorted_ports != inst.ports) {
        std::map<std::string, int> old_pos;
        for (int i = 0; i < static_cast<int>(inst.ports.size()); ++i)
            if (!old_pos.emplace(inst.ports[i], i).second)
                throw ParseError("duplicate port id: " + inst.ports[i]);
        std::vector<std::vector<double>> matrix(sorted_ports.size(),
                                                std::vector<double>(sorted_ports.size()));
        for (size_t i = 0; i < sorted_ports.size(); ++i)
            for (size_t j = 0; j < sorted_ports.size(); ++j)
                matrix[i][j] =
                    inst.sailing_hours[old_pos[sorted_ports[i]]][old_pos[sorted_ports[j]]];
        inst.ports = std::move(sorted_ports);
        inst.sailing_hours = std::move(matrix);
    }
    auto by_id = [](const auto& a, const auto& b) { return a.id < b.id; };
    std::sort(inst.vessels.begin(), inst.vessels.end(), by_id);
    std::sort(inst.contracts.begin(), inst.contracts.end(), by_id);
    std::sort(inst.berths.begin(), inst.berths.end(), by_id);
    std::sort(inst.windows.begin(), inst.windows.end(), by_id);
    for (auto& v : inst.vessels)
        if (v.accessible_windows)
            std::sort(v.accessible_windows->begin(), v.accessible_windows->end());

    inst.finalize();

    auto violations = validate_instance(inst);
    if (!violations.empty()) {
        std::ostringstream msg;
        msg << "instance violates " << violations.size() << " invariant(s):";
        for (const auto& v : violations) msg << "\n  [" << v.entity << "] " << v.detail;
        throw ParseError(msg.str());
    }
    return inst;
}

Instance load_instance_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open instance file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_instance(buf.str());
}

std::string save_instance(const Instance& inst) {
    Writer w;
    w.begin_object();

    w.key("berths");
    w.begin_array();
    for (const auto& b : inst.berths) {
        w.begin_object();
        w.key("id"); w.value_string(b.id);
        w.key("max_draft_m"); w.value_number(b.max_draft_m);
        w.key("port"); w.value_string(b.port);
        w.end_object();
    }
    w.end_array();

    w.key("contracts");
    w.begin_array();
    for (const auto& c : inst.contracts) {
        w.begin_object();
        w.key("compensation_per_pallet"); w.value_number(c.compensation_per_pallet);
        w.key("destination_port"); w.value_string(c.destination_port);
        w.key("due_date_h"); w.value_number(c.due_date_h);
        w.key("id"); w.value_string(c.id);
        if (!c.income_overrides.empty()) {
            w.key("income_overrides");
            w.begin_object();
            for (const auto& [k, v] : c.income_overrides) {
                w.key(k); w.value_number(v);
            }
            w.end_object();
        }
        w.key("income_per_pallet"); w.value_number(c.income_per_pallet);
        w.key("size_pallets"); w.value_int(c.size_pallets);
        w.key("vessel"); w.value_string(c.vessel);
        w.end_object();
    }
    w.end_array();

    w.key("draft_per_pallet_m");
    w.value_number(inst.draft_per_pallet_m);

    w.key("ports");
    w.begin_array();
    for (const auto& p : inst.ports) w.value_string(p);
    w.end_array();

    w.key("sailing_hours");
    w.begin_array();
    for (const auto& row : inst.sailing_hours) {
        w.begin_array();
        for (double x : row) w.value_number(x);
        w.end_array();
    }
    w.end_array();

    w.key("vessels");
    w.begin_array();
    for (const auto& v : inst.vessels) {
        w.begin_object();
        if (v.accessible_windows) {
            w.key("accessible_windows");
            w.begin_array();
            for (const auto& id : *v.accessible_windows) w.value_string(id);
            w.end_array();
        }
        w.key("capacity_pallets"); w.value_int(v.capacity_pallets);
        w.key("fuel_rate"); w.value_number(v.fuel_rate);
        w.key("id"); w.value_string(v.id);
        w.key("light_draft_m"); w.value_number(v.light_draft_m);
        w.key("origin_port"); w.value_string(v.origin_port);
        w.key("rent_rate"); w.value_number(v.rent_rate);
        w.key("speed_knots"); w.value_number(v.speed_knots);
        w.end_object();
    }
    w.end_array();

    w.key("windows");
    w.begin_array();
    for (const auto& win : inst.windows) {
        w.begin_object();
        w.key("berth"); w.value_string(win.berth);
        w.key("fee"); w.value_number(win.fee);
        if (!win.fee_overrides.empty()) {
            w.key("fee_overrides");
            w.begin_object();
            for (const auto& [k, v] : win.fee_overrides) {
                w.key(k); w.value_number(v);
            }
            w.end_object();
        }
        w.key("id"); w.value_string(win.id);
        w.key("load_time_per_pallet_h"); w.value_number(win.load_time_per_pallet_h);
        w.key("lower_h"); w.value_number(win.lower_h);
        w.key("upper_h"); w.value_number(win.upper_h);
        w.end_object();
    }
    w.end_array();

    w.end_object();
    return w.str() + "\n";
}

void save_instance_file(const Instance& inst, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write instance file: " + path);
    out << save_instance(inst);
}

std::vector<Violation> validate_instance(const Instance& inst) {
    std::vector<Violation> out;
    auto flag = [&](const std::string& entity, const std::string& rule,
                    const std::string& detail) {
        out.push_back({entity, rule, detail});
    };

    for (const auto& v : inst.vessels) {
        if (v.light_draft_m <= 0)
            flag(v.id, "positive light draft", "light_draft_m must be > 0");
        if (v.rent_rate <= 0) flag(v.id, "positive rent rate", "rent_rate must be > 0");
        if (v.fuel_rate <= 0) flag(v.id, "positive fuel rate", "fuel_rate must be > 0");
        if (v.speed_knots <= 0) flag(v.id, "positive speed", "speed_knots must be > 0");
    }
    for (int vi = 0; vi < static_cast<int>(inst.vessels.size()); ++vi) {
        const auto& v = inst.vessels[vi];
        std::int64_t assigned = inst.assigned_pallets(vi);
        if (v.capacity_pallets < assigned)
            flag(v.id, "capacity below assigned cargo",
                 "capacity " + std::to_string(v.capacity_pallets) + " < assigned " +
                     std::to_string(assigned));
        if (inst.vessel_contracts(vi).empty())
            flag(v.id, "vessel without contracts", "every vessel needs at least one contract");
        // One destination node per vessel: all its contracts must agree.
        int dest = -1;
        for (int c : inst.vessel_contracts(vi)) {
            int p = inst.port_index(inst.contracts[c].destination_port);
            if (dest < 0) dest = p;
            else if (dest != p)
                flag(v.id, "multiple destinations unsupported",
                     "contracts of one vessel must share a destination port");
        }
    }

    for (const auto& c : inst.contracts) {
        if (c.size_pallets <= 0) flag(c.id, "positive cargo size", "size_pallets must be > 0");
        if (c.due_date_h <= 0) flag(c.id, "positive due date", "due_date_h must be > 0");
        if (c.compensation_per_pallet < 0)
            flag(c.id, "nonnegative compensation", "compensation_per_pallet must be >= 0");
    }

    for (const auto& b : inst.berths)
        if (b.max_draft_m <= 0) flag(b.id, "positive berth draft", "max_draft_m must be > 0");

    for (const auto& w : inst.windows) {
        if (w.lower_h >= w.upper_h)
            flag(w.id, "empty time window",
                 "lower_h " + canon_number(w.lower_h) + " must be < upper_h " +
                     canon_number(w.upper_h));
        if (w.load_time_per_pallet_h <= 0)
            flag(w.id, "positive load time", "load_time_per_pallet_h must be > 0");
        if (w.fee < 0) flag(w.id, "nonnegative fee", "fee must be >= 0");
    }

    // Same-berth windows must not overlap.
    for (size_t a = 0; a < inst.windows.size(); ++a) {
        for (size_t b = a + 1; b < inst.windows.size(); ++b) {
            const auto& wa = inst.windows[a];
            const auto& wb = inst.windows[b];
            if (wa.berth != wb.berth) continue;
            if (wa.lower_h < wb.upper_h && wb.lower_h < wa.upper_h)
                flag(wa.id, "overlapping windows",
                     "windows " + wa.id + " and " + wb.id + " of berth " + wa.berth +
                         " overlap");
        }
    }

    size_t n = inst.ports.size();
    if (inst.sailing_hours.size() != n)
        flag("", "sailing matrix shape", "sailing_hours must be ports x ports");
    for (size_t i = 0; i < inst.sailing_hours.size() && i < n; ++i) {
        const auto& row = inst.sailing_hours[i];
        if (row.size() != n) {
            flag("", "sailing matrix shape", "row " + std::to_string(i) + " has wrong length");
            continue;
        }
        for (size_t j = 0; j < n; ++j) {
            if (row[j] < 0)
                flag("", "nonnegative sailing time",
                     "sailing_hours[" + std::to_string(i) + "][" + std::to_string(j) + "] < 0");
            if (i == j && row[j] != 0)
                flag("", "zero sailing diagonal",
                     "sailing_hours[" + std::to_string(i) + "][" + std::to_string(i) +
                         "] must be 0");
            if (j < inst.sailing_hours.size() && inst.sailing_hours[j].size() == n &&
                i < j && row[j] != inst.sailing_hours[j][i])
                flag("", "symmetric sailing matrix",
                     "sailing_hours[" + std::to_string(i) + "][" + std::to_string(j) +
                         "] differs from its transpose");
        }
    }

    if (inst.draft_per_pallet_m <= 0)
        flag("", "positive draft per pallet", "draft_per_pallet_m must be > 0");

    return out;
}

}  // namespace shipsched

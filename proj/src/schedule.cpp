#include "shipsched/schedule.hpp"

#include <json.hpp>

namespace shipsched {

using nlohmann::json;

double Schedule::loaded_by_vessel(int v, const Instance& inst) const {
    (void)inst;
    double total = 0.0;
    for (const auto& d : vessels[v].dockings) total += d.total_load();
    return total;
}

VesselSchedule idle_vessel_schedule(const Instance& inst, int vessel) {
    VesselSchedule vs;
    vs.vessel = vessel;
    vs.depart_h = 0.0;
    vs.arrive_dest_h = inst.sail_hours(inst.origin_port_of(vessel),
                                       inst.vessel_destination_port(vessel));
    return vs;
}

Schedule idle_fleet_schedule(const Instance& inst) {
    Schedule s;
    for (int v = 0; v < static_cast<int>(inst.vessels.size()); ++v)
        s.vessels.push_back(idle_vessel_schedule(inst, v));
    s.shortfall.resize(inst.contracts.size());
    for (size_t c = 0; c < inst.contracts.size(); ++c)
        s.shortfall[c] = static_cast<double>(inst.contracts[c].size_pallets);
    return s;
}

std::string schedule_to_json(const Schedule& s, const Instance& inst) {
    json j;
    j["contracts"] = json::object();
    for (size_t c = 0; c < s.shortfall.size(); ++c)
        j["contracts"][inst.contracts[c].id] = {{"shortfall", s.shortfall[c]}};

    j["vessels"] = json::array();
    for (const auto& vs : s.vessels) {
        json jv;
        jv["id"] = inst.vessels[vs.vessel].id;
        jv["depart_h"] = vs.depart_h;
        jv["arrive_dest_h"] = vs.arrive_dest_h;
        json route = json::array();
        route.push_back("origin");
        for (const auto& d : vs.dockings) route.push_back(inst.windows[d.window].id);
        route.push_back("destination");
        jv["route"] = route;
        jv["dockings"] = json::array();
        for (const auto& d : vs.dockings) {
            json jd;
            jd["window"] = inst.windows[d.window].id;
            jd["arrive_h"] = d.arrive_h;
            jd["loads"] = json::object();
            for (const auto& [c, p] : d.loads) jd["loads"][inst.contracts[c].id] = p;
            jv["dockings"].push_back(jd);
        }
        j["vessels"].push_back(jv);
    }

    if (!s.window_order.empty()) {
        j["window_order"] = json::object();
        for (const auto& [w, order] : s.window_order) {
            json arr = json::array();
            for (int v : order) arr.push_back(inst.vessels[v].id);
            j["window_order"][inst.windows[w].id] = arr;
        }
    }
    return j.dump(2) + "\n";
}

Schedule schedule_from_json(const std::string& text, const Instance& inst) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("schedule document: ") + e.what());
    }

    Schedule s;
    s.shortfall.assign(inst.contracts.size(), 0.0);
    if (j.contains("contracts"))
        for (auto& [cid, body] : j["contracts"].items())
            s.shortfall[inst.contract_index(cid)] = body.at("shortfall").get<double>();

    s.vessels.resize(inst.vessels.size());
    for (int v = 0; v < static_cast<int>(inst.vessels.size()); ++v)
        s.vessels[v].vessel = v;
    if (!j.contains("vessels") || !j["vessels"].is_array())
        throw ParseError("schedule document: missing vessels array");
    for (const auto& jv : j["vessels"]) {
        int v = inst.vessel_index(jv.at("id").get<std::string>());
        VesselSchedule& vs = s.vessels[v];
        vs.vessel = v;
        vs.depart_h = jv.value("depart_h", 0.0);
        vs.arrive_dest_h = jv.value("arrive_dest_h", 0.0);
        if (jv.contains("dockings"))
            for (const auto& jd : jv["dockings"]) {
                Docking d;
                d.window = inst.window_index(jd.at("window").get<std::string>());
                d.arrive_h = jd.at("arrive_h").get<double>();
                if (jd.contains("loads"))
                    for (auto& [cid, pallets] : jd["loads"].items())
                        d.loads[inst.contract_index(cid)] = pallets.get<double>();
                vs.dockings.push_back(std::move(d));
            }
    }

    if (j.contains("window_order"))
        for (auto& [wid, arr] : j["window_order"].items()) {
            std::vector<int> order;
            for (const auto& vid : arr) order.push_back(inst.vessel_index(vid.get<std::string>()));
            s.window_order[inst.window_index(wid)] = order;
        }
    return s;
}

}  // namespace shipsched

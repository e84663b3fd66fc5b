#include "shipsched/network.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include <json.hpp>

namespace shipsched {

namespace {

void rebuild_adjacency(VesselGraph& g) {
    g.out_arcs.assign(g.nodes.size(), {});
    g.in_arcs.assign(g.nodes.size(), {});
    for (int a = 0; a < static_cast<int>(g.arcs.size()); ++a) {
        g.out_arcs[g.arcs[a].tail].push_back(a);
        g.in_arcs[g.arcs[a].head].push_back(a);
    }
}

std::string node_label(const VesselGraph& g, const Instance& inst, int node) {
    const Node& n = g.nodes[node];
    switch (n.kind) {
        case NodeKind::Origin: return "origin";
        case NodeKind::Destination: return "destination";
        case NodeKind::Window: return inst.windows[n.window].id;
    }
    return "?";
}

}  // namespace

int VesselGraph::draft_arc_count() const {
    int n = 0;
    for (const auto& a : arcs) n += a.in_draft_subnet ? 1 : 0;
    return n;
}

std::vector<int> ExpandedNetwork::shared_windows(int v1, int v2) const {
    std::vector<int> out;
    for (const auto& [w, n] : graphs[v1].window_node)
        if (graphs[v2].window_node.count(w)) out.push_back(w);
    return out;
}

ExpandedNetwork build_network(const Instance& inst) {
    ExpandedNetwork net;
    net.graphs.resize(inst.vessels.size());
    for (int v = 0; v < static_cast<int>(inst.vessels.size()); ++v) {
        VesselGraph& g = net.graphs[v];
        g.vessel = v;
        g.nodes.push_back({NodeKind::Origin, -1});
        for (int w : inst.vessel_windows(v)) {
            g.window_node[w] = static_cast<int>(g.nodes.size());
            g.nodes.push_back({NodeKind::Window, w});
        }
        g.nodes.push_back({NodeKind::Destination, -1});

        int origin_port = inst.origin_port_of(v);
        int dest_port = inst.vessel_destination_port(v);
        int dest = g.destination_node();

        auto add = [&](int tail, int head, double sail) {
            bool draft = g.nodes[tail].kind == NodeKind::Window &&
                         g.nodes[head].kind != NodeKind::Origin;
            g.arcs.push_back({tail, head, sail, draft});
        };

        for (const auto& [w, n] : g.window_node)
            add(g.origin_node(), n, inst.sail_hours(origin_port, inst.berth_port_of_window(w)));
        for (const auto& [wa, na] : g.window_node)
            for (const auto& [wb, nb] : g.window_node)
                if (na != nb)
                    add(na, nb,
                        inst.sail_hours(inst.berth_port_of_window(wa),
                                        inst.berth_port_of_window(wb)));
        for (const auto& [w, n] : g.window_node)
            add(n, dest, inst.sail_hours(inst.berth_port_of_window(w), dest_port));
        add(g.origin_node(), dest, inst.sail_hours(origin_port, dest_port));

        rebuild_adjacency(g);
    }
    return net;
}

std::vector<double> earliest_arrivals(const VesselGraph& g, const Instance& inst) {
    std::vector<double> label(g.nodes.size(), kUnreachable);
    label[g.origin_node()] = 0.0;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    queue.push({0.0, g.origin_node()});
    while (!queue.empty()) {
        auto [dist, node] = queue.top();
        queue.pop();
        if (dist > label[node]) continue;
        double depart = dist;
        if (g.nodes[node].kind == NodeKind::Window) {
            const auto& w = inst.windows[g.nodes[node].window];
            depart = std::max(dist, w.lower_h);
            if (depart > w.upper_h) continue;  // cannot pass through at all
        }
        for (int a : g.out_arcs[node]) {
            double cand = depart + g.arcs[a].sail_hours;
            if (cand < label[g.arcs[a].head]) {
                label[g.arcs[a].head] = cand;
                queue.push({cand, g.arcs[a].head});
            }
        }
    }
    return label;
}

double earliest_arrival(const ExpandedNetwork& net, const Instance& inst, int vessel,
                        int node) {
    return earliest_arrivals(net.graphs[vessel], inst)[node];
}

ExpandedNetwork reduce_network(const ExpandedNetwork& net, const Instance& inst,
                               ReductionReport* report, double min_load_pallets) {
    ExpandedNetwork out = net;
    ReductionReport local;
    bool changed = true;
    while (changed) {
        changed = false;
        local.passes++;
        for (auto& g : out.graphs) {
            auto labels = earliest_arrivals(g, inst);

            std::set<int> dead_nodes;  // node ids
            // Node rules first: direct-from-origin service too short, or
            // no way in at all.
            for (const auto& [w, node] : g.window_node) {
                const auto& win = inst.windows[w];
                double latest_start = win.upper_h - win.load_time_per_pallet_h * min_load_pallets;
                double direct = kUnreachable;
                for (int a : g.out_arcs[g.origin_node()])
                    if (g.arcs[a].head == node) direct = g.arcs[a].sail_hours;
                if (direct != kUnreachable &&
                    std::max(direct, win.lower_h) >= latest_start) {
                    dead_nodes.insert(node);
                    local.events.push_back(
                        {"node-min-load", g.vessel, "", inst.windows[w].id});
                } else if (labels[node] == kUnreachable) {
                    dead_nodes.insert(node);
                    local.events.push_back(
                        {"node-unreachable", g.vessel, "", inst.windows[w].id});
                }
            }

            // Arc rule: docking via (i, j) leaves no time to load the
            // minimum amount at j.
            std::set<int> dead_arcs;
            for (int a = 0; a < static_cast<int>(g.arcs.size()); ++a) {
                const Arc& arc = g.arcs[a];
                if (g.nodes[arc.head].kind != NodeKind::Window) continue;
                if (dead_nodes.count(arc.head) || dead_nodes.count(arc.tail)) continue;
                double depart = labels[arc.tail];
                if (depart == kUnreachable) continue;  // tail dies via node rule
                if (g.nodes[arc.tail].kind == NodeKind::Window)
                    depart = std::max(depart, inst.windows[g.nodes[arc.tail].window].lower_h);
                const auto& win = inst.windows[g.nodes[arc.head].window];
                double dock = std::max(depart + arc.sail_hours, win.lower_h);
                if (dock >= win.upper_h - win.load_time_per_pallet_h * min_load_pallets) {
                    dead_arcs.insert(a);
                    local.events.push_back({"arc-no-load-time", g.vessel,
                                            node_label(g, inst, arc.tail),
                                            node_label(g, inst, arc.head)});
                }
            }

            if (dead_nodes.empty() && dead_arcs.empty()) continue;
            changed = true;
            local.nodes_removed += static_cast<int>(dead_nodes.size());

            // Rebuild the graph without the removed entities.
            VesselGraph next;
            next.vessel = g.vessel;
            std::vector<int> remap(g.nodes.size(), -1);
            for (int n = 0; n < static_cast<int>(g.nodes.size()); ++n) {
                if (dead_nodes.count(n)) continue;
                remap[n] = static_cast<int>(next.nodes.size());
                next.nodes.push_back(g.nodes[n]);
                if (g.nodes[n].kind == NodeKind::Window)
                    next.window_node[g.nodes[n].window] = remap[n];
            }
            for (int a = 0; a < static_cast<int>(g.arcs.size()); ++a) {
                const Arc& arc = g.arcs[a];
                if (dead_arcs.count(a)) {
                    local.arcs_removed++;
                    continue;
                }
                if (remap[arc.tail] < 0 || remap[arc.head] < 0) {
                    local.arcs_removed++;
                    continue;
                }
                next.arcs.push_back({remap[arc.tail], remap[arc.head], arc.sail_hours,
                                     arc.in_draft_subnet});
            }
            rebuild_adjacency(next);
            g = std::move(next);
        }
    }
    if (report) *report = std::move(local);
    return out;
}

std::string ReductionReport::to_json(const Instance& inst) const {
    nlohmann::json j;
    j["arcs_removed"] = arcs_removed;
    j["nodes_removed"] = nodes_removed;
    j["passes"] = passes;
    j["events"] = nlohmann::json::array();
    for (const auto& e : events) {
        nlohmann::json je;
        je["rule"] = e.rule;
        je["vessel"] = inst.vessels[e.vessel].id;
        if (!e.from.empty()) je["from"] = e.from;
        je["to"] = e.to;
        j["events"].push_back(je);
    }
    return j.dump(2);
}

}  // namespace shipsched

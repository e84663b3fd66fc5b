#pragma once

#include <limits>
#include <map>
#include <string>
#include <vector>

#include "shipsched/instance.hpp"

namespace shipsched {

enum class NodeKind { Origin, Window, Destination };

struct Node {
    NodeKind kind = NodeKind::Origin;
    int window = -1;  // global window index, only for Window nodes
};

struct Arc {
    int tail = -1;
    int head = -1;
    double sail_hours = 0.0;
    // True iff tail is a window node and head is a window or the
    // destination: the subnetwork where draft variation flows live.
    bool in_draft_subnet = false;
};

/// Per-vessel expanded graph: node 0 is the origin, the last node the
/// destination, one node per accessible berth time window in between.
struct VesselGraph {
    int vessel = -1;
    std::vector<Node> nodes;
    std::vector<Arc> arcs;
    std::vector<std::vector<int>> out_arcs;  // arc ids leaving each node
    std::vector<std::vector<int>> in_arcs;   // arc ids entering each node
    std::map<int, int> window_node;          // global window index -> node id

    int origin_node() const { return 0; }
    int destination_node() const { return static_cast<int>(nodes.size()) - 1; }
    int node_of_window(int w) const {
        auto it = window_node.find(w);
        return it == window_node.end() ? -1 : it->second;
    }
    int draft_arc_count() const;
};

struct ExpandedNetwork {
    std::vector<VesselGraph> graphs;

    /// Windows usable by both vessels (their sequencing battleground).
    std::vector<int> shared_windows(int v1, int v2) const;
};

struct ReductionEvent {
    std::string rule;       // "arc-no-load-time", "node-min-load", "node-unreachable"
    int vessel = -1;
    std::string from;       // node label ("origin", window id) for arc rules
    std::string to;         // head node label, or the removed window id
};

struct ReductionReport {
    std::vector<ReductionEvent> events;
    int arcs_removed = 0;
    int nodes_removed = 0;
    int passes = 0;

    std::string to_json(const Instance& inst) const;
};

constexpr double kUnreachable = std::numeric_limits<double>::infinity();

/// Build the full expanded network: origin->window, window->window,
/// window->destination arcs plus a direct origin->destination arc so an
/// idle vessel stays representable.
ExpandedNetwork build_network(const Instance& inst);

/// Optimistic earliest docking/arrival times from the origin: sailing
/// plus waiting for window lower bounds, zero loading. Unreachable
/// nodes get +infinity.
std::vector<double> earliest_arrivals(const VesselGraph& g, const Instance& inst);
double earliest_arrival(const ExpandedNetwork& net, const Instance& inst, int vessel,
                        int node);

/// Time-window elimination rules, iterated to a fixed point:
///  - drop an arc into a window when docking via it leaves no time to
///    load `min_load_pallets`;
///  - drop a window node when even the direct leg from the origin leaves
///    service time below the threshold;
///  - drop window nodes that end up unreachable.
ExpandedNetwork reduce_network(const ExpandedNetwork& net, const Instance& inst,
                               ReductionReport* report = nullptr,
                               double min_load_pallets = 1.0);

}  // namespace shipsched

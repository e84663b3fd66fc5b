#include "shipsched/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace shipsched {

namespace {

const char* kind_tag(VarKind k) {
    switch (k) {
        case VarKind::RouteArc: return "x";
        case VarKind::ArrivalTime: return "t";
        case VarKind::DraftFlow: return "d";
        case VarKind::WindowLoad: return "p";
        case VarKind::Shortfall: return "s";
        case VarKind::DockOrder: return "y";
    }
    return "?";
}

double min_due_date(const Instance& inst, int vessel) {
    double due = inst.horizon_h;
    for (int c : inst.vessel_contracts(vessel))
        due = std::min(due, inst.contracts[c].due_date_h);
    return due;
}

}  // namespace

int MilpModel::var_count(VarKind kind) const {
    int n = 0;
    for (const auto& v : vars) n += v.kind == kind ? 1 : 0;
    return n;
}

int MilpModel::row_count(int family) const {
    int n = 0;
    for (const auto& r : rows) n += r.family == family ? 1 : 0;
    return n;
}

std::string MilpModel::var_name(int index) const {
    const VarInfo& v = vars[index];
    std::ostringstream out;
    out << kind_tag(v.kind);
    if (v.vessel >= 0) out << "." << inst->vessels[v.vessel].id;
    if (v.vessel2 >= 0) out << "." << inst->vessels[v.vessel2].id;
    if (v.window >= 0) out << "." << inst->windows[v.window].id;
    if (v.contract >= 0) out << "." << inst->contracts[v.contract].id;
    if (v.arc >= 0) {
        const auto& g = net->graphs[v.vessel];
        const Arc& a = g.arcs[v.arc];
        auto label = [&](int n) -> std::string {
            if (g.nodes[n].kind == NodeKind::Origin) return "O";
            if (g.nodes[n].kind == NodeKind::Destination) return "D";
            return inst->windows[g.nodes[n].window].id;
        };
        out << "." << label(a.tail) << ">" << label(a.head);
    } else if (v.node >= 0 && v.kind == VarKind::ArrivalTime) {
        const auto& g = net->graphs[v.vessel];
        if (g.nodes[v.node].kind == NodeKind::Origin) out << ".O";
        else if (g.nodes[v.node].kind == NodeKind::Destination) out << ".D";
        else out << "." << inst->windows[g.nodes[v.node].window].id;
    }
    return out.str();
}

std::string MilpModel::stats_string() const {
    std::ostringstream out;
    out << vars.size() << " columns (x:" << var_count(VarKind::RouteArc)
        << " t:" << var_count(VarKind::ArrivalTime) << " d:" << var_count(VarKind::DraftFlow)
        << " p:" << var_count(VarKind::WindowLoad) << " s:" << var_count(VarKind::Shortfall)
        << " y:" << var_count(VarKind::DockOrder) << "), " << rows.size() << " rows (";
    for (int f = 2; f <= 14; ++f) out << (f > 2 ? " " : "") << "(" << f << "):" << row_count(f);
    out << ")";
    return out.str();
}

double MilpModel::objective_value(const std::vector<double>& assignment) const {
    double v = 0.0;
    for (size_t i = 0; i < obj.size(); ++i) v += obj[i] * assignment[i];
    return v;
}

std::vector<std::pair<int, double>> MilpModel::row_violations(
    const std::vector<double>& assignment, double tol) const {
    std::vector<std::pair<int, double>> out;
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
        const LinRow& row = rows[r];
        double act = 0.0;
        for (const auto& [var, coef] : row.terms) act += coef * assignment[var];
        double miss = 0.0;
        if (row.sense == RowSense::LE) miss = act - row.rhs;
        else if (row.sense == RowSense::GE) miss = row.rhs - act;
        else miss = std::fabs(act - row.rhs);
        if (miss > tol) out.push_back({r, miss});
    }
    return out;
}

BigMRecord compute_big_m(const ExpandedNetwork& net, const Instance& inst) {
    BigMRecord rec;
    rec.m2.resize(inst.contracts.size());
    for (size_t c = 0; c < inst.contracts.size(); ++c)
        rec.m2[c] = static_cast<double>(inst.contracts[c].size_pallets);

    rec.m1.resize(net.graphs.size());
    double max_sail = 0.0;
    double max_load_time = 0.0;
    for (const auto& g : net.graphs) {
        double cargo_draft =
            inst.draft_per_pallet_m * static_cast<double>(inst.assigned_pallets(g.vessel));
        for (int a = 0; a < static_cast<int>(g.arcs.size()); ++a) {
            const Arc& arc = g.arcs[a];
            max_sail = std::max(max_sail, arc.sail_hours);
            if (!arc.in_draft_subnet) continue;
            double cap = cargo_draft;
            if (g.nodes[arc.head].kind == NodeKind::Window)
                cap = std::min(cap, vessel_window_draft_cap(inst, g.vessel,
                                                            g.nodes[arc.head].window));
            rec.m1[g.vessel][a] = cap;
        }
        for (const auto& [w, node] : g.window_node)
            max_load_time = std::max(max_load_time,
                                     inst.windows[w].load_time_per_pallet_h *
                                         static_cast<double>(inst.assigned_pallets(g.vessel)));
    }
    rec.m3 = rec.m4 = inst.horizon_h + max_sail + max_load_time;
    rec.m5 = inst.horizon_h;
    return rec;
}

MilpModel build_model(std::shared_ptr<const ExpandedNetwork> net,
                      std::shared_ptr<const Instance> inst, const BuildOptions& options) {
    MilpModel m;
    m.inst = inst;
    m.net = net;
    m.options = options;
    m.big_m = compute_big_m(*net, *inst);
    const Instance& in = *inst;
    const ExpandedNetwork& nw = *net;
    int n_vessels = static_cast<int>(nw.graphs.size());

    m.x_index.resize(n_vessels);
    m.t_index.resize(n_vessels);
    m.d_index.resize(n_vessels);
    m.p_index.resize(n_vessels);
    m.s_index.assign(in.contracts.size(), -1);

    auto add_var = [&](VarInfo v) {
        m.vars.push_back(v);
        m.obj.push_back(0.0);
        return static_cast<int>(m.vars.size()) - 1;
    };

    // Columns, per vessel: route arcs, node times, draft flows, loads.
    for (int v = 0; v < n_vessels; ++v) {
        const VesselGraph& g = nw.graphs[v];
        m.x_index[v].assign(g.arcs.size(), -1);
        m.t_index[v].assign(g.nodes.size(), -1);
        m.d_index[v].assign(g.arcs.size(), -1);

        for (int a = 0; a < static_cast<int>(g.arcs.size()); ++a) {
            VarInfo info;
            info.kind = VarKind::RouteArc;
            info.lo = 0.0;
            info.hi = 1.0;
            info.is_binary = true;
            info.vessel = v;
            info.arc = a;
            m.x_index[v][a] = add_var(info);
        }
        for (int n = 0; n < static_cast<int>(g.nodes.size()); ++n) {
            VarInfo info;
            info.kind = VarKind::ArrivalTime;
            info.lo = 0.0;
            info.hi = g.nodes[n].kind == NodeKind::Window
                          ? in.windows[g.nodes[n].window].upper_h
                          : in.horizon_h;
            info.vessel = v;
            info.node = n;
            if (g.nodes[n].kind == NodeKind::Window) info.window = g.nodes[n].window;
            m.t_index[v][n] = add_var(info);
        }
        for (int a = 0; a < static_cast<int>(g.arcs.size()); ++a) {
            if (!g.arcs[a].in_draft_subnet) continue;
            VarInfo info;
            info.kind = VarKind::DraftFlow;
            info.lo = 0.0;
            info.hi = m.big_m.m1[v].at(a);
            info.vessel = v;
            info.arc = a;
            m.d_index[v][a] = add_var(info);
        }
        for (const auto& [w, node] : g.window_node) {
            for (int c : in.vessel_contracts(v)) {
                VarInfo info;
                info.kind = VarKind::WindowLoad;
                info.lo = 0.0;
                info.hi = m.big_m.m2[c];
                info.vessel = v;
                info.node = node;
                info.window = w;
                info.contract = c;
                m.p_index[v][{node, c}] = add_var(info);
            }
        }
    }
    for (int c = 0; c < static_cast<int>(in.contracts.size()); ++c) {
        VarInfo info;
        info.kind = VarKind::Shortfall;
        info.lo = 0.0;
        info.hi = m.big_m.m2[c];
        info.vessel = in.vessel_index(in.contracts[c].vessel);
        info.contract = c;
        m.s_index[c] = add_var(info);
    }
    for (int w = 0; w < static_cast<int>(in.windows.size()); ++w) {
        for (int v1 = 0; v1 < n_vessels; ++v1) {
            if (nw.graphs[v1].node_of_window(w) < 0) continue;
            for (int v2 = 0; v2 < n_vessels; ++v2) {
                if (v1 == v2 || nw.graphs[v2].node_of_window(w) < 0) continue;
                VarInfo info;
                info.kind = VarKind::DockOrder;
                info.lo = 0.0;
                info.hi = 1.0;
                info.is_binary = true;
                info.vessel = v1;
                info.vessel2 = v2;
                info.window = w;
                m.y_index[{w, v1, v2}] = add_var(info);
            }
        }
    }

    // Objective: income minus fees, rent, fuel (light and draft-borne)
    // and compensation.
    for (int v = 0; v < n_vessels; ++v) {
        const VesselGraph& g = nw.graphs[v];
        const VesselSpec& vs = in.vessels[v];
        for (const auto& [w, node] : g.window_node) {
            for (int c : in.vessel_contracts(v))
                m.obj[m.p_index[v].at({node, c})] += in.income_per_pallet(c, w);
            double fee = in.window_fee(w, v);
            for (int a : g.in_arcs[node]) m.obj[m.x_index[v][a]] -= fee;
        }
        m.obj[m.t_index[v][g.destination_node()]] -= vs.rent_rate;
        m.obj[m.t_index[v][g.origin_node()]] += vs.rent_rate;
        for (int a = 0; a < static_cast<int>(g.arcs.size()); ++a) {
            m.obj[m.x_index[v][a]] -= vs.fuel_rate * g.arcs[a].sail_hours;
            if (m.d_index[v][a] >= 0)
                m.obj[m.d_index[v][a]] -=
                    vs.fuel_rate * g.arcs[a].sail_hours / vs.light_draft_m;
        }
    }
    for (int c = 0; c < static_cast<int>(in.contracts.size()); ++c)
        m.obj[m.s_index[c]] -= in.contracts[c].compensation_per_pallet;

    auto add_row = [&](LinRow row) {
        // Zero coefficients (l_w = 0 lower-bound rows, zero-headroom caps)
        // carry no information and would not survive an MPS round trip.
        row.terms.erase(std::remove_if(row.terms.begin(), row.terms.end(),
                                       [](const auto& t) { return t.second == 0.0; }),
                        row.terms.end());
        m.rows.push_back(std::move(row));
    };

    // (2) contract balance: loads across the vessel's windows plus the
    // shortfall equal the contracted size.
    for (int v = 0; v < n_vessels; ++v) {
        const VesselGraph& g = nw.graphs[v];
        for (int c : in.vessel_contracts(v)) {
            LinRow row;
            row.family = 2;
            row.vessel = v;
            row.contract = c;
            for (const auto& [w, node] : g.window_node)
                row.terms.push_back({m.p_index[v].at({node, c}), 1.0});
            row.terms.push_back({m.s_index[c], 1.0});
            row.sense = RowSense::EQ;
            row.rhs = static_cast<double>(in.contracts[c].size_pallets);
            add_row(row);
        }
    }

    // (3) unit ship flow from origin to destination.
    for (int v = 0; v < n_vessels; ++v) {
        const VesselGraph& g = nw.graphs[v];
        for (int n = 0; n < static_cast<int>(g.nodes.size()); ++n) {
            LinRow row;
            row.family = 3;
            row.vessel = v;
            row.node = n;
            for (int a : g.out_arcs[n]) row.terms.push_back({m.x_index[v][a], 1.0});
            for (int a : g.in_arcs[n]) row.terms.push_back({m.x_index[v][a], -1.0});
            row.sense = RowSense::EQ;
            row.rhs = g.nodes[n].kind == NodeKind::Origin        ? 1.0
                      : g.nodes[n].kind == NodeKind::Destination ? -1.0
                                                                 : 0.0;
            add_row(row);
        }
    }

    // (4) draft balance: outgoing minus incoming draft flow equals the
    // local load increment; everything loaded must reach the destination.
    for (int v = 0; v < n_vessels; ++v) {
        const VesselGraph& g = nw.graphs[v];
        for (const auto& [w, node] : g.window_node) {
            LinRow row;
            row.family = 4;
            row.vessel = v;
            row.node = node;
            row.window = w;
            for (int a : g.out_arcs[node])
                if (m.d_index[v][a] >= 0) row.terms.push_back({m.d_index[v][a], 1.0});
            for (int a : g.in_arcs[node])
                if (m.d_index[v][a] >= 0) row.terms.push_back({m.d_index[v][a], -1.0});
            for (int c : in.vessel_contracts(v))
                row.terms.push_back({m.p_index[v].at({node, c}), -in.draft_per_pallet_m});
            row.sense = RowSense::EQ;
            row.rhs = 0.0;
            add_row(row);
        }
        LinRow dest;
        dest.family = 4;
        dest.vessel = v;
        dest.node = g.destination_node();
        double rhs = 0.0;
        for (int a : g.in_arcs[g.destination_node()])
            if (m.d_index[v][a] >= 0) dest.terms.push_back({m.d_index[v][a], 1.0});
        for (int c : in.vessel_contracts(v)) {
            dest.terms.push_back({m.s_index[c], in.draft_per_pallet_m});
            rhs += in.draft_per_pallet_m * static_cast<double>(in.contracts[c].size_pallets);
        }
        dest.sense = RowSense::EQ;
        dest.rhs = rhs;
        add_row(dest);
    }

    // (5) draft flows only on sailed legs.
    for (int v = 0; v < n_vessels; ++v) {
        const VesselGraph& g = nw.graphs[v];
        for (int a = 0; a < static_cast<int>(g.arcs.size()); ++a) {
            if (m.d_index[v][a] < 0) continue;
            LinRow row;
            row.family = 5;
            row.vessel = v;
            row.arc = a;
            row.terms.push_back({m.d_index[v][a], 1.0});
            row.terms.push_back({m.x_index[v][a], -m.big_m.m1[v].at(a)});
            row.sense = RowSense::LE;
            row.rhs = 0.0;
            add_row(row);
        }
    }

    // (6) loads only where the vessel docks.
    for (int v = 0; v < n_vessels; ++v) {
        const VesselGraph& g = nw.graphs[v];
        for (const auto& [w, node] : g.window_node) {
            for (int c : in.vessel_contracts(v)) {
                LinRow row;
                row.family = 6;
                row.vessel = v;
                row.window = w;
                row.node = node;
                row.contract = c;
                row.terms.push_back({m.p_index[v].at({node, c}), 1.0});
                for (int a : g.in_arcs[node])
                    row.terms.push_back({m.x_index[v][a], -m.big_m.m2[c]});
                row.sense = RowSense::LE;
                row.rhs = 0.0;
                add_row(row);
            }
        }
    }

    // (7) time chaining out of the origin; (8) out of window nodes with
    // loading time.
    for (int v = 0; v < n_vessels; ++v) {
        const VesselGraph& g = nw.graphs[v];
        for (int a = 0; a < static_cast<int>(g.arcs.size()); ++a) {
            const Arc& arc = g.arcs[a];
            if (g.nodes[arc.tail].kind == NodeKind::Origin) {
                LinRow row;
                row.family = 7;
                row.vessel = v;
                row.arc = a;
                row.terms.push_back({m.t_index[v][arc.head], 1.0});
                row.terms.push_back({m.t_index[v][arc.tail], -1.0});
                row.terms.push_back({m.x_index[v][a], -m.big_m.m3});
                row.sense = RowSense::GE;
                row.rhs = arc.sail_hours - m.big_m.m3;
                add_row(row);
            } else if (g.nodes[arc.tail].kind == NodeKind::Window) {
                int w = g.nodes[arc.tail].window;
                LinRow row;
                row.family = 8;
                row.vessel = v;
                row.arc = a;
                row.window = w;
                row.terms.push_back({m.t_index[v][arc.head], 1.0});
                row.terms.push_back({m.t_index[v][arc.tail], -1.0});
                for (int c : in.vessel_contracts(v))
                    row.terms.push_back({m.p_index[v].at({arc.tail, c}),
                                         -in.windows[w].load_time_per_pallet_h});
                row.terms.push_back({m.x_index[v][a], -m.big_m.m4});
                row.sense = RowSense::GE;
                row.rhs = arc.sail_hours - m.big_m.m4;
                add_row(row);
            }
        }
    }

    // (9) a later vessel waits until the earlier one finished loading;
    // (10) two vessels in one window need an agreed order.
    for (int w = 0; w < static_cast<int>(in.windows.size()); ++w) {
        for (int v1 = 0; v1 < n_vessels; ++v1) {
            int n1 = nw.graphs[v1].node_of_window(w);
            if (n1 < 0) continue;
            for (int v2 = 0; v2 < n_vessels; ++v2) {
                if (v1 == v2) continue;
                int n2 = nw.graphs[v2].node_of_window(w);
                if (n2 < 0) continue;
                LinRow row;
                row.family = 9;
                row.vessel = v1;
                row.vessel2 = v2;
                row.window = w;
                row.terms.push_back({m.t_index[v2][n2], 1.0});
                row.terms.push_back({m.t_index[v1][n1], -1.0});
                for (int c : in.vessel_contracts(v1))
                    row.terms.push_back({m.p_index[v1].at({n1, c}),
                                         -in.windows[w].load_time_per_pallet_h});
                row.terms.push_back({m.y_index.at({w, v1, v2}), -m.big_m.m5});
                row.sense = RowSense::GE;
                row.rhs = -m.big_m.m5;
                add_row(row);
            }
        }
        for (int v1 = 0; v1 < n_vessels; ++v1) {
            int n1 = nw.graphs[v1].node_of_window(w);
            if (n1 < 0) continue;
            for (int v2 = v1 + 1; v2 < n_vessels; ++v2) {
                int n2 = nw.graphs[v2].node_of_window(w);
                if (n2 < 0) continue;
                LinRow row;
                row.family = 10;
                row.vessel = v1;
                row.vessel2 = v2;
                row.window = w;
                for (int a : nw.graphs[v1].in_arcs[n1])
                    row.terms.push_back({m.x_index[v1][a], 1.0});
                for (int a : nw.graphs[v2].in_arcs[n2])
                    row.terms.push_back({m.x_index[v2][a], 1.0});
                row.terms.push_back({m.y_index.at({w, v1, v2}), -1.0});
                row.terms.push_back({m.y_index.at({w, v2, v1}), -1.0});
                row.sense = RowSense::LE;
                row.rhs = 1.0;
                add_row(row);
            }
        }
    }

    // (11) arrival draft plus the new load must fit the berth headroom.
    for (int v = 0; v < n_vessels; ++v) {
        const VesselGraph& g = nw.graphs[v];
        for (const auto& [w, node] : g.window_node) {
            LinRow row;
            row.family = 11;
            row.vessel = v;
            row.window = w;
            row.node = node;
            for (int a : g.in_arcs[node])
                if (m.d_index[v][a] >= 0) row.terms.push_back({m.d_index[v][a], 1.0});
            for (int c : in.vessel_contracts(v))
                row.terms.push_back({m.p_index[v].at({node, c}), in.draft_per_pallet_m});
            row.sense = RowSense::LE;
            row.rhs = vessel_window_draft_cap(in, v, w);
            add_row(row);
        }
    }

    // (12)/(13) operate inside the window.
    for (int v = 0; v < n_vessels; ++v) {
        const VesselGraph& g = nw.graphs[v];
        for (const auto& [w, node] : g.window_node) {
            LinRow low;
            low.family = 12;
            low.vessel = v;
            low.window = w;
            low.node = node;
            low.terms.push_back({m.t_index[v][node], 1.0});
            for (int a : g.in_arcs[node])
                low.terms.push_back({m.x_index[v][a], -in.windows[w].lower_h});
            low.sense = RowSense::GE;
            low.rhs = 0.0;
            add_row(low);

            LinRow high;
            high.family = 13;
            high.vessel = v;
            high.window = w;
            high.node = node;
            high.terms.push_back({m.t_index[v][node], 1.0});
            for (int c : in.vessel_contracts(v))
                high.terms.push_back({m.p_index[v].at({node, c}),
                                      in.windows[w].load_time_per_pallet_h});
            high.sense = RowSense::LE;
            high.rhs = in.windows[w].upper_h;
            add_row(high);
        }
    }

    // (14) reach the destination by the tightest due date.
    for (int v = 0; v < n_vessels; ++v) {
        LinRow row;
        row.family = 14;
        row.vessel = v;
        row.terms.push_back({m.t_index[v][nw.graphs[v].destination_node()], 1.0});
        row.sense = RowSense::LE;
        row.rhs = min_due_date(in, v);
        add_row(row);
    }

    return m;
}

std::vector<double> assignment_from_schedule(const MilpModel& model, const Schedule& schedule) {
    const Instance& in = *model.inst;
    const ExpandedNetwork& nw = *model.net;
    std::vector<double> x(model.vars.size(), 0.0);

    for (size_t c = 0; c < in.contracts.size(); ++c)
        x[model.s_index[c]] = schedule.shortfall[c];

    for (int v = 0; v < static_cast<int>(nw.graphs.size()); ++v) {
        const VesselGraph& g = nw.graphs[v];
        const VesselSchedule& vs = schedule.vessels[v];

        // Park every window time at a harmless in-window value first.
        for (const auto& [w, node] : g.window_node)
            x[model.t_index[v][node]] = std::min(in.windows[w].lower_h, in.horizon_h);
        x[model.t_index[v][g.origin_node()]] = vs.depart_h;
        x[model.t_index[v][g.destination_node()]] = vs.arrive_dest_h;

        // Trace the route and light up its arcs.
        std::vector<int> path_nodes;
        path_nodes.push_back(g.origin_node());
        for (const auto& d : vs.dockings) {
            int node = g.node_of_window(d.window);
            if (node < 0)
                throw ScheduleMismatchError("vessel " + in.vessels[v].id +
                                            " docks at a window outside its network: " +
                                            in.windows[d.window].id);
            path_nodes.push_back(node);
            x[model.t_index[v][node]] = d.arrive_h;
            for (const auto& [c, pallets] : d.loads) {
                auto it = model.p_index[v].find({node, c});
                if (it == model.p_index[v].end())
                    throw ScheduleMismatchError("load of contract " + in.contracts[c].id +
                                                " has no model column for vessel " +
                                                in.vessels[v].id);
                x[it->second] = pallets;
            }
        }
        path_nodes.push_back(g.destination_node());

        double carried_draft = 0.0;
        size_t docking_idx = 0;
        for (size_t k = 0; k + 1 < path_nodes.size(); ++k) {
            int tail = path_nodes[k], head = path_nodes[k + 1];
            int arc = -1;
            for (int a : g.out_arcs[tail])
                if (g.arcs[a].head == head) arc = a;
            if (arc < 0)
                throw ScheduleMismatchError("vessel " + in.vessels[v].id +
                                            " uses a leg missing from its network");
            x[model.x_index[v][arc]] = 1.0;
            if (g.nodes[tail].kind == NodeKind::Window) {
                carried_draft +=
                    in.draft_per_pallet_m * vs.dockings[docking_idx - 1].total_load();
                x[model.d_index[v][arc]] = carried_draft;
            }
            if (g.nodes[head].kind == NodeKind::Window) docking_idx++;
        }
    }

    // Dock orders: explicit when recorded, otherwise by docking time.
    for (int w = 0; w < static_cast<int>(in.windows.size()); ++w) {
        std::vector<std::pair<double, int>> docked;  // (time, vessel)
        for (int v = 0; v < static_cast<int>(schedule.vessels.size()); ++v)
            for (const auto& d : schedule.vessels[v].dockings)
                if (d.window == w) docked.push_back({d.arrive_h, v});
        if (docked.size() < 2) continue;
        std::vector<int> order;
        auto it = schedule.window_order.find(w);
        if (it != schedule.window_order.end()) {
            order = it->second;
        } else {
            std::sort(docked.begin(), docked.end());
            for (const auto& [t, v] : docked) order.push_back(v);
        }
        for (size_t i = 0; i < order.size(); ++i)
            for (size_t j = i + 1; j < order.size(); ++j) {
                auto key = std::make_tuple(w, order[i], order[j]);
                auto yit = model.y_index.find(key);
                if (yit != model.y_index.end()) x[yit->second] = 1.0;
            }
    }
    return x;
}

MilpModel fix_vessel(const MilpModel& model, int vessel, const Schedule& schedule) {
    MilpModel out = model;
    std::vector<double> pinned = assignment_from_schedule(model, schedule);

    std::vector<bool> fixed(out.vars.size(), false);
    for (int i = 0; i < static_cast<int>(out.vars.size()); ++i) {
        const VarInfo& v = out.vars[i];
        bool mine = false;
        switch (v.kind) {
            case VarKind::RouteArc:
            case VarKind::ArrivalTime:
            case VarKind::DraftFlow:
            case VarKind::WindowLoad:
                mine = v.vessel == vessel;
                break;
            case VarKind::Shortfall:
                mine = v.vessel == vessel;  // the contract's pre-assigned carrier
                break;
            case VarKind::DockOrder:
                mine = false;  // order stays free for the remaining vessels
                break;
        }
        if (!mine) continue;
        out.vars[i].lo = out.vars[i].hi = pinned[i];
        fixed[i] = true;
    }

    // The pinned values must satisfy every row they fully determine.
    for (int r = 0; r < static_cast<int>(out.rows.size()); ++r) {
        const LinRow& row = out.rows[r];
        bool determined = true;
        double act = 0.0;
        for (const auto& [var, coef] : row.terms) {
            if (!fixed[var]) {
                determined = false;
                break;
            }
            act += coef * pinned[var];
        }
        if (!determined) continue;
        double miss = row.sense == RowSense::LE   ? act - row.rhs
                      : row.sense == RowSense::GE ? row.rhs - act
                                                  : std::fabs(act - row.rhs);
        if (miss > model.options.feasibility_tol)
            throw ScheduleMismatchError(
                "schedule/model mismatch: vessel " + model.inst->vessels[vessel].id +
                " violates a family (" + std::to_string(row.family) + ") row by " +
                std::to_string(miss));
    }
    return out;
}

MilpModel drop_sequencing(const MilpModel& model, const std::vector<int>& vessels) {
    MilpModel out = model;
    std::vector<bool> drop_vessel(model.net->graphs.size(), false);
    for (int v : vessels) drop_vessel[v] = true;

    out.rows.clear();
    for (const auto& row : model.rows) {
        bool sequencing = row.family == 9 || row.family == 10;
        bool touched = sequencing && ((row.vessel >= 0 && drop_vessel[row.vessel]) ||
                                      (row.vessel2 >= 0 && drop_vessel[row.vessel2]));
        if (!touched) out.rows.push_back(row);
    }

    // Dock-order columns no remaining row references get removed.
    std::vector<bool> referenced(out.vars.size(), false);
    for (const auto& row : out.rows)
        for (const auto& [var, coef] : row.terms) referenced[var] = true;
    std::vector<int> remap(out.vars.size(), -1);
    std::vector<VarInfo> vars;
    std::vector<double> obj;
    for (int i = 0; i < static_cast<int>(out.vars.size()); ++i) {
        if (out.vars[i].kind == VarKind::DockOrder && !referenced[i]) continue;
        remap[i] = static_cast<int>(vars.size());
        vars.push_back(out.vars[i]);
        obj.push_back(out.obj[i]);
    }
    if (vars.size() == out.vars.size()) return out;  // nothing orphaned

    out.vars = std::move(vars);
    out.obj = std::move(obj);
    for (auto& row : out.rows)
        for (auto& [var, coef] : row.terms) var = remap[var];
    for (auto& per_vessel : out.x_index)
        for (auto& idx : per_vessel) idx = idx < 0 ? -1 : remap[idx];
    for (auto& per_vessel : out.t_index)
        for (auto& idx : per_vessel) idx = idx < 0 ? -1 : remap[idx];
    for (auto& per_vessel : out.d_index)
        for (auto& idx : per_vessel) idx = idx < 0 ? -1 : remap[idx];
    for (auto& per_vessel : out.p_index)
        for (auto& [key, idx] : per_vessel) idx = remap[idx];
    for (auto& idx : out.s_index) idx = remap[idx];
    std::map<std::tuple<int, int, int>, int> y_index;
    for (const auto& [key, idx] : out.y_index)
        if (remap[idx] >= 0) y_index[key] = remap[idx];
    out.y_index = std::move(y_index);
    return out;
}

Schedule extract_schedule(const MilpModel& model, const std::vector<double>& assignment) {
    const Instance& in = *model.inst;
    const ExpandedNetwork& nw = *model.net;
    double itol = model.options.integrality_tol;

    for (int i = 0; i < static_cast<int>(model.vars.size()); ++i) {
        if (!model.vars[i].is_binary) continue;
        double v = assignment[i];
        if (std::fabs(v - std::round(v)) > itol)
            throw ScheduleMismatchError("fractional binary in assignment: " +
                                        model.var_name(i) + " = " + std::to_string(v));
    }

    Schedule s;
    s.vessels.resize(nw.graphs.size());
    s.shortfall.resize(in.contracts.size());
    for (size_t c = 0; c < in.contracts.size(); ++c)
        s.shortfall[c] = assignment[model.s_index[c]];

    for (int v = 0; v < static_cast<int>(nw.graphs.size()); ++v) {
        const VesselGraph& g = nw.graphs[v];
        VesselSchedule& vs = s.vessels[v];
        vs.vessel = v;
        vs.depart_h = assignment[model.t_index[v][g.origin_node()]];
        vs.arrive_dest_h = assignment[model.t_index[v][g.destination_node()]];

        auto on = [&](int arc) { return assignment[model.x_index[v][arc]] > 0.5; };
        int used = 0;
        for (int a = 0; a < static_cast<int>(g.arcs.size()); ++a) used += on(a) ? 1 : 0;

        int current = g.origin_node();
        int steps = 0;
        while (current != g.destination_node()) {
            int next_arc = -1;
            for (int a : g.out_arcs[current]) {
                if (!on(a)) continue;
                if (next_arc >= 0)
                    throw ScheduleMismatchError("disconnected x-arcs: vessel " +
                                                in.vessels[v].id + " branches at a node");
                next_arc = a;
            }
            if (next_arc < 0)
                throw ScheduleMismatchError("disconnected x-arcs: vessel " +
                                            in.vessels[v].id + " route dead-ends");
            current = g.arcs[next_arc].head;
            steps++;
            if (steps > static_cast<int>(g.nodes.size()))
                throw ScheduleMismatchError("disconnected x-arcs: vessel " +
                                            in.vessels[v].id + " route cycles");
            if (g.nodes[current].kind == NodeKind::Window) {
                Docking d;
                d.window = g.nodes[current].window;
                d.arrive_h = assignment[model.t_index[v][current]];
                for (int c : in.vessel_contracts(v)) {
                    double pallets = assignment[model.p_index[v].at({current, c})];
                    if (pallets > 1e-9) d.loads[c] = pallets;
                }
                vs.dockings.push_back(std::move(d));
            }
        }
        if (steps != used)
            throw ScheduleMismatchError("disconnected x-arcs: vessel " + in.vessels[v].id +
                                        " has route arcs off its origin-destination path");
    }

    // Dock order at shared windows, earliest service first.
    for (int w = 0; w < static_cast<int>(in.windows.size()); ++w) {
        std::vector<std::pair<double, int>> docked;
        for (const auto& vs : s.vessels)
            for (const auto& d : vs.dockings)
                if (d.window == w) docked.push_back({d.arrive_h, vs.vessel});
        if (docked.size() < 2) continue;
        // Ties can only happen with a zero-length service, where the
        // order is immaterial; vessel index keeps it deterministic.
        std::sort(docked.begin(), docked.end());
        std::vector<int> order;
        for (const auto& [t, v] : docked) order.push_back(v);
        s.window_order[w] = order;
    }
    return s;
}

}  // namespace shipsched

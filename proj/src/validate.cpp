#include "shipsched/validate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "shipsched/simplex.hpp"

namespace shipsched {

bool ValidationReport::has_family(int family) const {
    for (const auto& v : violations)
        if (v.family == family) return true;
    return false;
}

std::string ValidationReport::to_json() const {
    nlohmann::json j;
    j["ok"] = ok();
    j["violations"] = nlohmann::json::array();
    for (const auto& v : violations) {
        nlohmann::json jv;
        jv["family"] = v.family;
        jv["entity"] = v.entity;
        jv["slack"] = v.slack;
        jv["detail"] = v.detail;
        j["violations"].push_back(jv);
    }
    return j.dump(2);
}

ValidationReport check_schedule(const Instance& inst, const Schedule& schedule, double tol) {
    if (schedule.vessels.size() != inst.vessels.size() ||
        schedule.shortfall.size() != inst.contracts.size())
        throw std::invalid_argument("schedule does not match the instance's entity counts");

    ValidationReport report;
    auto flag = [&](int family, const std::string& entity, double slack,
                    const std::string& detail) {
        report.violations.push_back({family, entity, slack, detail});
    };

    // (2) contract balance across all dockings.
    std::vector<double> carried(inst.contracts.size(), 0.0);
    for (const auto& vs : schedule.vessels)
        for (const auto& d : vs.dockings)
            for (const auto& [c, p] : d.loads) carried[c] += p;
    for (size_t c = 0; c < inst.contracts.size(); ++c) {
        double expect = static_cast<double>(inst.contracts[c].size_pallets);
        double got = carried[c] + schedule.shortfall[c];
        if (std::fabs(got - expect) > tol)
            flag(2, inst.contracts[c].id, got - expect,
                 "loaded plus shortfall is " + std::to_string(got) + ", contract size is " +
                     std::to_string(expect));
    }

    for (const auto& vs : schedule.vessels) {
        int v = vs.vessel;
        const std::string& vid = inst.vessels[v].id;
        const auto& accessible = inst.vessel_windows(v);

        // (3) route structure: known, accessible, unrepeated windows.
        std::set<int> seen;
        for (const auto& d : vs.dockings) {
            if (d.window < 0 || d.window >= static_cast<int>(inst.windows.size())) {
                flag(3, vid, 0.0, "docking at an unknown window");
                continue;
            }
            if (!std::binary_search(accessible.begin(), accessible.end(), d.window))
                flag(3, vid, 0.0,
                     "window " + inst.windows[d.window].id + " is not accessible to " + vid);
            if (!seen.insert(d.window).second)
                flag(3, vid, 0.0,
                     "window " + inst.windows[d.window].id + " visited twice on one route");
        }

        double assigned = static_cast<double>(inst.assigned_pallets(v));
        double total_loaded = 0.0;
        for (const auto& d : vs.dockings) {
            // (4) nonnegative loads (draft increments follow loads).
            for (const auto& [c, p] : d.loads) {
                if (p < -tol)
                    flag(4, vid, p,
                         "negative load of " + inst.contracts[c].id + " at " +
                             inst.windows[d.window].id);
                total_loaded += p;
            }
            // (6) loads belong to the vessel's own contracts and stay
            // within the contracted size per window.
            for (const auto& [c, p] : d.loads) {
                if (inst.vessel_index(inst.contracts[c].vessel) != v)
                    flag(6, vid, p,
                         "contract " + inst.contracts[c].id + " is not assigned to " + vid);
                else if (p > static_cast<double>(inst.contracts[c].size_pallets) + tol)
                    flag(6, vid, p - static_cast<double>(inst.contracts[c].size_pallets),
                         "load of " + inst.contracts[c].id + " at " +
                             inst.windows[d.window].id + " exceeds the contracted size");
            }
        }
        // (5) the vessel cannot carry more than its assigned cargo.
        if (total_loaded > assigned + tol)
            flag(5, vid, total_loaded - assigned,
                 "carries " + std::to_string(total_loaded) + " pallets, assigned " +
                     std::to_string(assigned));

        // (7)/(8) time propagation along the route.
        int origin = inst.origin_port_of(v);
        int dest = inst.vessel_destination_port(v);
        if (vs.dockings.empty()) {
            double need = vs.depart_h + inst.sail_hours(origin, dest);
            if (vs.arrive_dest_h < need - tol)
                flag(7, vid, vs.arrive_dest_h - need,
                     "arrives before the direct leg could finish");
        } else {
            const Docking& first = vs.dockings.front();
            double need =
                vs.depart_h + inst.sail_hours(origin, inst.berth_port_of_window(first.window));
            if (first.arrive_h < need - tol)
                flag(7, vid, first.arrive_h - need,
                     "docks at " + inst.windows[first.window].id +
                         " before the leg from the origin could finish");
            for (size_t k = 0; k + 1 < vs.dockings.size(); ++k) {
                const Docking& a = vs.dockings[k];
                const Docking& b = vs.dockings[k + 1];
                double ready = a.arrive_h + a.service_hours(inst) +
                               inst.sail_hours(inst.berth_port_of_window(a.window),
                                               inst.berth_port_of_window(b.window));
                if (b.arrive_h < ready - tol)
                    flag(8, vid, b.arrive_h - ready,
                         "docks at " + inst.windows[b.window].id +
                             " before finishing at " + inst.windows[a.window].id);
            }
            const Docking& last = vs.dockings.back();
            double ready = last.arrive_h + last.service_hours(inst) +
                           inst.sail_hours(inst.berth_port_of_window(last.window), dest);
            if (vs.arrive_dest_h < ready - tol)
                flag(8, vid, vs.arrive_dest_h - ready,
                     "arrives at the destination before the last leg could finish");
        }

        // (11) running draft against the berth headroom.
        double cum_draft = 0.0;
        for (const auto& d : vs.dockings) {
            double increment = inst.draft_per_pallet_m * d.total_load();
            double cap = vessel_window_draft_cap(inst, v, d.window);
            if (cum_draft + increment > cap + tol)
                flag(11, vid, cum_draft + increment - cap,
                     "draft " + std::to_string(cum_draft + increment) + " m exceeds " +
                         std::to_string(cap) + " m at " + inst.windows[d.window].id);
            cum_draft += increment;
        }

        // (12)/(13) operate inside each window.
        for (const auto& d : vs.dockings) {
            const auto& w = inst.windows[d.window];
            if (d.arrive_h < w.lower_h - tol)
                flag(12, vid, d.arrive_h - w.lower_h,
                     "docks at " + w.id + " before it opens");
            double done = d.arrive_h + d.service_hours(inst);
            if (done > w.upper_h + tol)
                flag(13, vid, done - w.upper_h, "still loading when " + w.id + " closes");
        }

        // (14) due dates.
        double due = std::numeric_limits<double>::infinity();
        for (int c : inst.vessel_contracts(v))
            due = std::min(due, inst.contracts[c].due_date_h);
        if (vs.arrive_dest_h > due + tol)
            flag(14, vid, vs.arrive_dest_h - due, "arrives after the earliest due date");
    }

    // (9) two vessels may not operate in one window at the same time.
    for (int w = 0; w < static_cast<int>(inst.windows.size()); ++w) {
        struct Call { double start, end; int vessel; };
        std::vector<Call> calls;
        for (const auto& vs : schedule.vessels)
            for (const auto& d : vs.dockings)
                if (d.window == w)
                    calls.push_back({d.arrive_h, d.arrive_h + d.service_hours(inst), vs.vessel});
        std::sort(calls.begin(), calls.end(),
                  [](const Call& a, const Call& b) { return a.start < b.start; });
        for (size_t k = 0; k + 1 < calls.size(); ++k) {
            if (calls[k + 1].start < calls[k].end - tol)
                flag(9, inst.windows[w].id, calls[k].end - calls[k + 1].start,
                     inst.vessels[calls[k + 1].vessel].id + " docks while " +
                         inst.vessels[calls[k].vessel].id + " is still loading");
        }

        // (10) a recorded docking order must agree with the times.
        auto it = schedule.window_order.find(w);
        if (it == schedule.window_order.end()) continue;
        std::map<int, double> start;
        for (const auto& c : calls) start[c.vessel] = c.start;
        const auto& order = it->second;
        for (size_t i = 0; i < order.size(); ++i)
            for (size_t j = i + 1; j < order.size(); ++j) {
                auto a = start.find(order[i]);
                auto b = start.find(order[j]);
                if (a == start.end() || b == start.end()) continue;
                if (a->second > b->second + tol)
                    flag(10, inst.windows[w].id, a->second - b->second,
                         "recorded order puts " + inst.vessels[order[i]].id + " before " +
                             inst.vessels[order[j]].id + " but it docks later");
            }
    }

    return report;
}

double vessel_objective(const Instance& inst, const Schedule& schedule, int vessel) {
    const VesselSchedule& vs = schedule.vessels[vessel];
    const VesselSpec& spec = inst.vessels[vessel];

    double income = 0.0, fees = 0.0, fuel_light = 0.0, fuel_draft = 0.0;
    int origin = inst.origin_port_of(vessel);
    int dest = inst.vessel_destination_port(vessel);

    double cum_draft = 0.0;
    int previous_port = origin;
    for (const auto& d : vs.dockings) {
        int port = inst.berth_port_of_window(d.window);
        double leg = inst.sail_hours(previous_port, port);
        fuel_light += spec.fuel_rate * leg;
        fuel_draft += spec.fuel_rate * leg * cum_draft / spec.light_draft_m;
        for (const auto& [c, p] : d.loads) income += inst.income_per_pallet(c, d.window) * p;
        fees += inst.window_fee(d.window, vessel);
        cum_draft += inst.draft_per_pallet_m * d.total_load();
        previous_port = port;
    }
    double leg = inst.sail_hours(previous_port, dest);
    fuel_light += spec.fuel_rate * leg;
    fuel_draft += spec.fuel_rate * leg * cum_draft / spec.light_draft_m;

    double rent = spec.rent_rate * (vs.arrive_dest_h - vs.depart_h);
    double compensation = 0.0;
    for (int c : inst.vessel_contracts(vessel))
        compensation += inst.contracts[c].compensation_per_pallet * schedule.shortfall[c];

    return income - fees - rent - fuel_light - fuel_draft - compensation;
}

double objective_recompute(const Instance& inst, const Schedule& schedule) {
    ValidationReport report = check_schedule(inst, schedule);
    if (!report.ok()) {
        std::ostringstream msg;
        msg << "schedule is infeasible (" << report.violations.size() << " violations):";
        for (const auto& v : report.violations)
            msg << "\n  family(" << v.family << ") " << v.entity << ": " << v.detail;
        throw std::invalid_argument(msg.str());
    }
    double total = 0.0;
    for (int v = 0; v < static_cast<int>(inst.vessels.size()); ++v)
        total += vessel_objective(inst, schedule, v);
    return total;
}

double reporting_gap(double f_reference, double f_value) {
    if (std::fabs(f_reference) < 1e-12) return 0.0;
    return (f_reference - f_value) / f_reference;
}

FleetStats fleet_stats(const Instance& inst, const Schedule& schedule) {
    FleetStats stats;
    double used_sum = 0.0;
    double loaded_total = 0.0;
    for (const auto& vs : schedule.vessels) {
        int docks = static_cast<int>(vs.dockings.size());
        stats.avg_docks += docks;
        stats.max_docks = std::max(stats.max_docks, docks);
        double loaded = 0.0;
        for (const auto& d : vs.dockings) loaded += d.total_load();
        loaded_total += loaded;
        used_sum += loaded / static_cast<double>(inst.vessels[vs.vessel].capacity_pallets);
    }
    if (!schedule.vessels.empty()) {
        stats.avg_docks /= static_cast<double>(schedule.vessels.size());
        stats.avg_used_capacity = used_sum / static_cast<double>(schedule.vessels.size());
    }
    double contracted = 0.0;
    for (const auto& c : inst.contracts) contracted += static_cast<double>(c.size_pallets);
    stats.cargo_satisfied = contracted > 0.0 ? loaded_total / contracted : 0.0;
    return stats;
}

namespace {

// Residual LP of a fixed route combination, solved in loads, times and
// shortfalls. No binaries, no deactivation constants: an independent
// route-enumeration formulation.
struct ResidualLp {
    LpProblem lp;           // minimization of the negated benefit
    double constant = 0.0;  // fees and light fuel of the fixed routes
    // column layout bookkeeping
    std::vector<int> t_origin, t_dest;                  // per vessel
    std::vector<std::vector<int>> t_dock;               // per vessel, per call
    std::vector<std::vector<std::map<int, int>>> load;  // per vessel, call, contract
    std::vector<int> shortfall;                         // per contract
};

ResidualLp build_residual(const Instance& inst, const std::vector<std::vector<int>>& routes,
                          const std::vector<std::pair<int, bool>>& orders) {
    ResidualLp r;
    int V = static_cast<int>(routes.size());
    r.t_origin.resize(V);
    r.t_dest.resize(V);
    r.t_dock.resize(V);
    r.load.resize(V);
    LpProblem& lp = r.lp;

    auto add_var = [&](double lo, double hi, double cost) {
        lp.lo.push_back(lo);
        lp.hi.push_back(hi);
        lp.cost.push_back(cost);
        return lp.n++;
    };
    // Row helpers in >= / <= / == form, converted to the kernel's (<=, ==).
    auto add_le = [&](std::vector<std::pair<int, double>> terms, double rhs) {
        lp.rows.push_back({std::move(terms), rhs, false});
    };
    auto add_ge = [&](std::vector<std::pair<int, double>> terms, double rhs) {
        for (auto& [j, c] : terms) c = -c;
        lp.rows.push_back({std::move(terms), -rhs, false});
    };
    auto add_eq = [&](std::vector<std::pair<int, double>> terms, double rhs) {
        lp.rows.push_back({std::move(terms), rhs, true});
    };

    double horizon = inst.horizon_h;
    for (int v = 0; v < V; ++v) {
        const VesselSpec& spec = inst.vessels[v];
        const auto& route = routes[v];
        int origin = inst.origin_port_of(v);
        int dest = inst.vessel_destination_port(v);

        // Rent: rho * (t_dest - t_origin); minimization negates the benefit.
        r.t_origin[v] = add_var(0.0, horizon, -spec.rent_rate);
        r.t_dest[v] = add_var(0.0, horizon, spec.rent_rate);

        r.t_dock[v].resize(route.size());
        r.load[v].resize(route.size());
        for (size_t k = 0; k < route.size(); ++k) {
            const auto& w = inst.windows[route[k]];
            r.t_dock[v][k] = add_var(w.lower_h, w.upper_h, 0.0);
        }

        // Per-pallet benefit of each load: income now, draft fuel on every
        // later leg of the route.
        std::vector<double> later_leg(route.size() + 1, 0.0);
        {
            int prev = origin;
            std::vector<double> legs;
            for (int w : route) {
                int port = inst.berth_port_of_window(w);
                legs.push_back(inst.sail_hours(prev, port));
                prev = port;
            }
            legs.push_back(inst.sail_hours(prev, dest));
            // later_leg[k]: sail hours after call k (calls are 0-based).
            double acc = 0.0;
            for (int k = static_cast<int>(route.size()); k >= 1; --k) {
                acc += legs[k];
                later_leg[k - 1] = acc;
            }
            for (double leg : legs) r.constant += spec.fuel_rate * leg;
        }

        for (size_t k = 0; k < route.size(); ++k) {
            r.constant += inst.window_fee(route[k], v);
            for (int c : inst.vessel_contracts(v)) {
                double draft_fuel = spec.fuel_rate * later_leg[k] *
                                    inst.draft_per_pallet_m / spec.light_draft_m;
                double benefit = inst.income_per_pallet(c, route[k]) - draft_fuel;
                r.load[v][k][c] =
                    add_var(0.0, static_cast<double>(inst.contracts[c].size_pallets),
                            -benefit);
            }
        }

        // Time propagation.
        int prev_port = origin;
        for (size_t k = 0; k < route.size(); ++k) {
            const auto& w = inst.windows[route[k]];
            double sail = inst.sail_hours(prev_port, inst.berth_port_of_window(route[k]));
            std::vector<std::pair<int, double>> terms = {{r.t_dock[v][k], 1.0}};
            if (k == 0) terms.push_back({r.t_origin[v], -1.0});
            else {
                terms.push_back({r.t_dock[v][k - 1], -1.0});
                for (const auto& [c, var] : r.load[v][k - 1])
                    terms.push_back({var, -inst.windows[route[k - 1]].load_time_per_pallet_h});
            }
            add_ge(terms, sail);
            // Finish inside the window.
            std::vector<std::pair<int, double>> inside = {{r.t_dock[v][k], 1.0}};
            for (const auto& [c, var] : r.load[v][k])
                inside.push_back({var, w.load_time_per_pallet_h});
            add_le(inside, w.upper_h);
            prev_port = inst.berth_port_of_window(route[k]);
        }
        {
            std::vector<std::pair<int, double>> terms = {{r.t_dest[v], 1.0}};
            double sail = inst.sail_hours(prev_port, dest);
            if (route.empty()) {
                terms.push_back({r.t_origin[v], -1.0});
            } else {
                size_t k = route.size() - 1;
                terms.push_back({r.t_dock[v][k], -1.0});
                for (const auto& [c, var] : r.load[v][k])
                    terms.push_back({var, -inst.windows[route[k]].load_time_per_pallet_h});
            }
            add_ge(terms, sail);
        }
        double due = std::numeric_limits<double>::infinity();
        for (int c : inst.vessel_contracts(v))
            due = std::min(due, inst.contracts[c].due_date_h);
        if (std::isfinite(due)) add_le({{r.t_dest[v], 1.0}}, due);

        // Draft accumulation at each call.
        for (size_t k = 0; k < route.size(); ++k) {
            std::vector<std::pair<int, double>> terms;
            for (size_t j = 0; j <= k; ++j)
                for (const auto& [c, var] : r.load[v][j])
                    terms.push_back({var, inst.draft_per_pallet_m});
            add_le(std::move(terms), vessel_window_draft_cap(inst, v, route[k]));
        }
    }

    // Contract balance with shortfalls (compensation in the objective).
    r.shortfall.resize(inst.contracts.size());
    for (int c = 0; c < static_cast<int>(inst.contracts.size()); ++c) {
        r.shortfall[c] =
            add_var(0.0, static_cast<double>(inst.contracts[c].size_pallets),
                    inst.contracts[c].compensation_per_pallet);
        int v = inst.vessel_index(inst.contracts[c].vessel);
        std::vector<std::pair<int, double>> terms = {{r.shortfall[c], 1.0}};
        if (v < V)
            for (size_t k = 0; k < routes[v].size(); ++k) {
                auto it = r.load[v][k].find(c);
                if (it != r.load[v][k].end()) terms.push_back({it->second, 1.0});
            }
        add_eq(std::move(terms), static_cast<double>(inst.contracts[c].size_pallets));
    }

    // Chosen docking orders at windows both routes visit.
    for (const auto& [w, first_is_v0] : orders) {
        int before = first_is_v0 ? 0 : 1;
        int after = 1 - before;
        int kb = -1, ka = -1;
        for (size_t k = 0; k < routes[before].size(); ++k)
            if (routes[before][k] == w) kb = static_cast<int>(k);
        for (size_t k = 0; k < routes[after].size(); ++k)
            if (routes[after][k] == w) ka = static_cast<int>(k);
        std::vector<std::pair<int, double>> terms = {{r.t_dock[after][ka], 1.0},
                                                     {r.t_dock[before][kb], -1.0}};
        for (const auto& [c, var] : r.load[before][kb])
            terms.push_back({var, -inst.windows[w].load_time_per_pallet_h});
        add_ge(std::move(terms), 0.0);
    }
    return r;
}

void append_routes(const std::vector<int>& windows, int max_len, std::vector<int>& current,
                   std::vector<std::vector<int>>& out) {
    out.push_back(current);
    if (static_cast<int>(current.size()) == max_len) return;
    for (int w : windows) {
        if (std::find(current.begin(), current.end(), w) != current.end()) continue;
        current.push_back(w);
        append_routes(windows, max_len, current, out);
        current.pop_back();
    }
}

}  // namespace

std::pair<double, Schedule> brute_force_optimum(const Instance& inst,
                                                const OracleLimits& limits) {
    int V = static_cast<int>(inst.vessels.size());
    if (V > limits.max_vessels)
        throw std::invalid_argument("oracle limits exceeded: too many vessels");
    for (int v = 0; v < V; ++v)
        if (static_cast<int>(inst.vessel_windows(v).size()) > limits.max_window_nodes)
            throw std::invalid_argument("oracle limits exceeded: too many windows per vessel");
    if (V == 2) {
        int shared = 0;
        for (int w : inst.vessel_windows(0)) {
            const auto& other = inst.vessel_windows(1);
            if (std::binary_search(other.begin(), other.end(), w)) shared++;
        }
        if (shared > limits.max_shared_windows)
            throw std::invalid_argument("oracle limits exceeded: too many shared windows");
    }

    std::vector<std::vector<std::vector<int>>> routes(V);
    for (int v = 0; v < V; ++v) {
        std::vector<int> current;
        append_routes(inst.vessel_windows(v), limits.max_window_nodes, current, routes[v]);
    }

    double best = -std::numeric_limits<double>::infinity();
    bool found = false;
    Schedule best_schedule;

    auto evaluate = [&](const std::vector<std::vector<int>>& combo) {
        // Windows both routes dock at need an explicit order.
        std::vector<int> joint;
        if (V == 2)
            for (int w : combo[0])
                if (std::find(combo[1].begin(), combo[1].end(), w) != combo[1].end())
                    joint.push_back(w);
        int order_count = 1 << joint.size();
        for (int bits = 0; bits < order_count; ++bits) {
            std::vector<std::pair<int, bool>> orders;
            for (size_t i = 0; i < joint.size(); ++i)
                orders.push_back({joint[i], (bits >> i & 1) == 0});
            ResidualLp residual = build_residual(inst, combo, orders);
            LpResult res = solve_lp(residual.lp);
            if (res.status != LpStatus::Optimal) continue;
            double value = -res.value - residual.constant;
            if (!found || value > best + 1e-9) {
                found = true;
                best = value;
                // Recover the schedule.
                Schedule s;
                s.vessels.resize(V);
                s.shortfall.resize(inst.contracts.size());
                for (int c = 0; c < static_cast<int>(inst.contracts.size()); ++c)
                    s.shortfall[c] = res.x[residual.shortfall[c]];
                for (int v = 0; v < V; ++v) {
                    VesselSchedule& vs = s.vessels[v];
                    vs.vessel = v;
                    vs.depart_h = res.x[residual.t_origin[v]];
                    vs.arrive_dest_h = res.x[residual.t_dest[v]];
                    for (size_t k = 0; k < combo[v].size(); ++k) {
                        Docking d;
                        d.window = combo[v][k];
                        d.arrive_h = res.x[residual.t_dock[v][k]];
                        for (const auto& [c, var] : residual.load[v][k])
                            if (res.x[var] > 1e-9) d.loads[c] = res.x[var];
                        vs.dockings.push_back(std::move(d));
                    }
                }
                for (size_t i = 0; i < joint.size(); ++i) {
                    bool v0_first = (bits >> i & 1) == 0;
                    s.window_order[joint[i]] = v0_first ? std::vector<int>{0, 1}
                                                        : std::vector<int>{1, 0};
                }
                best_schedule = std::move(s);
            }
        }
    };

    // Lexicographic combination sweep keeps ties deterministic.
    std::vector<std::vector<int>> combo(V);
    std::function<void(int)> sweep = [&](int v) {
        if (v == V) {
            evaluate(combo);
            return;
        }
        for (const auto& route : routes[v]) {
            combo[v] = route;
            sweep(v + 1);
        }
    };
    sweep(0);

    if (!found) throw std::runtime_error("oracle: no feasible route combination");
    return {best, best_schedule};
}

}  // namespace shipsched

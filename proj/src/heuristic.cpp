#include "shipsched/heuristic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "shipsched/validate.hpp"

namespace shipsched {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_left(Clock::time_point deadline) {
    return std::chrono::duration<double>(deadline - Clock::now()).count();
}

// Adopt one vessel's part of `from` (route, times, loads, shortfalls of
// its contracts) into `into`.
void adopt_vessel(Schedule& into, const Schedule& from, int vessel, const Instance& inst) {
    into.vessels[vessel] = from.vessels[vessel];
    for (int c : inst.vessel_contracts(vessel)) into.shortfall[c] = from.shortfall[c];
    // Window orders are recomputed from times when needed.
    into.window_order.clear();
    for (int w = 0; w < static_cast<int>(inst.windows.size()); ++w) {
        std::vector<std::pair<double, int>> docked;
        for (const auto& vs : into.vessels)
            for (const auto& d : vs.dockings)
                if (d.window == w) docked.push_back({d.arrive_h, vs.vessel});
        if (docked.size() < 2) continue;
        std::sort(docked.begin(), docked.end());
        std::vector<int> order;
        for (const auto& [t, v] : docked) order.push_back(v);
        into.window_order[w] = order;
    }
}

struct SubSolve {
    bool solved = false;        // found an incumbent
    bool timed_out = false;
    Schedule schedule;          // full fleet schedule of the sub-model
    double benefit = 0.0;       // objective share of the target vessel(s)
};

// Solve the base model with every vessel outside `free_set` pinned to
// `incumbent` and sequencing rows among other free vessels dropped.
SubSolve solve_subproblem(const MilpModel& base, const Schedule& incumbent,
                          const std::vector<int>& free_set, const Instance& inst,
                          const SolverOptions& solver_options, double budget_s) {
    SubSolve out;
    if (budget_s <= 0.0) {
        out.timed_out = true;
        return out;
    }
    std::vector<bool> is_free(inst.vessels.size(), false);
    for (int v : free_set) is_free[v] = true;

    std::vector<int> others;
    for (int v = 0; v < static_cast<int>(inst.vessels.size()); ++v)
        if (!is_free[v]) others.push_back(v);

    MilpModel sub = base;
    for (int v : others) sub = fix_vessel(sub, v, incumbent);

    SolverOptions opt = solver_options;
    opt.time_limit_s = budget_s;
    SolveResult res = solve(sub, opt);
    out.timed_out = res.status == SolveStatus::FeasibleTimeLimit;
    if (!res.has_incumbent) return out;

    out.schedule = extract_schedule(sub, res.assignment);
    for (int v : free_set) out.benefit += vessel_objective(inst, out.schedule, v);
    out.solved = true;
    return out;
}

}  // namespace

RatioEntry compute_ratio(const Instance& inst, const ExpandedNetwork& net,
                         const Schedule& schedule, int vessel) {
    RatioEntry entry;
    entry.vessel = vessel;
    entry.remaining_capacity = static_cast<double>(inst.vessels[vessel].capacity_pallets) -
                               schedule.loaded_by_vessel(vessel, inst);

    const VesselGraph& g = net.graphs[vessel];
    double sum = 0.0;
    int count = 0;
    for (const auto& [w, node] : g.window_node) {
        double bandwidth = inst.windows[w].bandwidth_h();
        for (const auto& d : schedule.vessels[vessel].dockings)
            if (d.window == w) bandwidth -= d.service_hours(inst);
        sum += bandwidth;
        count++;
    }
    entry.avg_bandwidth = count > 0 ? sum / count : 0.0;
    entry.ratio = entry.avg_bandwidth > 0.0
                      ? entry.remaining_capacity / entry.avg_bandwidth
                      : std::numeric_limits<double>::infinity();
    return entry;
}

Phase1Result phase1(std::shared_ptr<const Instance> inst,
                    std::shared_ptr<const ExpandedNetwork> net,
                    const HeuristicOptions& options) {
    auto start = Clock::now();
    auto deadline = start + std::chrono::duration_cast<Clock::duration>(
                                std::chrono::duration<double>(options.time_limit_s));
    const Instance& in = *inst;
    int V = static_cast<int>(in.vessels.size());
    int threads = options.threads > 0
                      ? options.threads
                      : std::max(1u, std::thread::hardware_concurrency());

    Phase1Result result;
    auto base = std::make_shared<MilpModel>(build_model(net, inst));
    result.base_model = base;

    Schedule working = idle_fleet_schedule(in);
    std::vector<int> free;
    for (int v = 0; v < V; ++v) free.push_back(v);

    int iteration = 0;
    while (!free.empty()) {
        iteration++;
        HeuristicIteration log;
        log.label = "IT 1." + std::to_string(iteration);

        // Single-vessel models for every free vessel, in parallel blocks,
        // merged in vessel order so the argmax is deterministic.
        std::vector<SubSolve> solves(free.size());
        double budget = seconds_left(deadline);
        for (size_t begin = 0; begin < free.size();
             begin += static_cast<size_t>(threads)) {
            size_t end = std::min(free.size(), begin + static_cast<size_t>(threads));
            std::vector<std::future<SubSolve>> futures;
            for (size_t k = begin; k < end; ++k) {
                int v = free[k];
                std::vector<int> other_free;
                for (int u : free)
                    if (u != v) other_free.push_back(u);
                futures.push_back(std::async(std::launch::async, [&, v, other_free]() {
                    MilpModel pruned = drop_sequencing(*base, other_free);
                    return solve_subproblem(pruned, working, {v}, in, options.solver,
                                            budget);
                }));
            }
            for (size_t k = begin; k < end; ++k) solves[k] = futures[k - begin].get();
        }

        int best = -1;
        for (size_t k = 0; k < free.size(); ++k) {
            int v = free[k];
            double benefit;
            if (solves[k].solved) {
                benefit = solves[k].benefit;
            } else {
                // Sub-solve timed out with nothing usable: the vessel sits
                // this phase out with an idle leg.
                benefit = vessel_objective(in, working, v);
                result.report.timed_out_vessels.push_back(v);
                result.report.budget_exhausted = true;
            }
            log.benefits[v] = benefit;
            if (best < 0 || benefit > log.benefits[free[best]]) best = static_cast<int>(k);
        }
        // Ties break toward the smallest vessel id: strict > above plus
        // ascending vessel order guarantees it.

        int chosen = free[best];
        if (solves[best].solved) adopt_vessel(working, solves[best].schedule, chosen, in);
        log.fixed_vessel = chosen;
        result.report.fixing_order.push_back(chosen);
        result.report.phase1.push_back(log);
        free.erase(free.begin() + best);

        if (free.empty()) break;
        if (free.size() == 1) {
            // Last vessel: one final solve against everything fixed.
            iteration++;
            HeuristicIteration last;
            last.label = "IT 1." + std::to_string(iteration);
            int v = free[0];
            SubSolve sub = solve_subproblem(*base, working, {v}, in, options.solver,
                                            seconds_left(deadline));
            double benefit;
            if (sub.solved) {
                adopt_vessel(working, sub.schedule, v, in);
                benefit = sub.benefit;
            } else {
                benefit = vessel_objective(in, working, v);
                result.report.timed_out_vessels.push_back(v);
                result.report.budget_exhausted = true;
            }
            last.benefits[v] = benefit;
            last.fixed_vessel = v;
            result.report.fixing_order.push_back(v);
            result.report.phase1.push_back(last);
            free.clear();
        }
    }

    ValidationReport check = check_schedule(in, working);
    if (!check.ok())
        throw std::logic_error("phase 1 produced an infeasible schedule:\n" +
                               check.to_json());

    result.schedule = working;
    for (int v = 0; v < V; ++v)
        result.benefits.push_back({v, vessel_objective(in, working, v)});
    result.report.f_phase1 = objective_recompute(in, working);
    result.report.time_phase1_s = std::chrono::duration<double>(Clock::now() - start).count();
    return result;
}

HeuristicResult phase2(std::shared_ptr<const Instance> inst,
                       std::shared_ptr<const ExpandedNetwork> net, Phase1Result p1,
                       const HeuristicOptions& options) {
    auto start = Clock::now();
    double budget = options.time_limit_s - p1.report.time_phase1_s;
    auto deadline = start + std::chrono::duration_cast<Clock::duration>(
                               std::chrono::duration<double>(std::max(budget, 0.0)));
    const Instance& in = *inst;
    int V = static_cast<int>(in.vessels.size());
    const MilpModel& base = *p1.base_model;

    HeuristicResult result;
    result.schedule_phase1 = p1.schedule;
    result.report = std::move(p1.report);

    Schedule working = p1.schedule;
    std::vector<double> benefit(V);
    for (const auto& b : p1.benefits) benefit[b.vessel] = b.benefit;

    std::set<std::pair<int, int>> evaluated;  // unordered pairs, (min,max)
    int process = 0;
    bool done = false;
    while (!done) {
        process++;
        HeuristicIteration log;
        log.label = "IT 2." + std::to_string(process);

        // Snap to 9 significant digits: LP round-off must not turn an
        // exact ratio tie into a spurious strict inequality.
        auto snap = [](double r) {
            if (!std::isfinite(r) || r == 0.0) return r;
            double mag = std::pow(10.0, 9.0 - std::ceil(std::log10(std::fabs(r))));
            return std::round(r * mag) / mag;
        };
        std::vector<RatioEntry> ratios(V);
        for (int v = 0; v < V; ++v) {
            ratios[v] = compute_ratio(in, *net, working, v);
            ratios[v].ratio = snap(ratios[v].ratio);
        }
        std::vector<int> high_first(V), low_first(V);
        for (int v = 0; v < V; ++v) high_first[v] = low_first[v] = v;
        std::sort(high_first.begin(), high_first.end(), [&](int a, int b) {
            if (ratios[a].ratio != ratios[b].ratio) return ratios[a].ratio > ratios[b].ratio;
            return a < b;
        });
        std::sort(low_first.begin(), low_first.end(), [&](int a, int b) {
            if (ratios[a].ratio != ratios[b].ratio) return ratios[a].ratio < ratios[b].ratio;
            return a < b;
        });

        bool improved = false;
        bool out_of_time = false;
        for (int p1pos = 0; p1pos < V && !improved && !out_of_time; ++p1pos) {
            for (int p2pos = 0; p2pos < V && !improved; ++p2pos) {
                int a = high_first[p1pos];
                int b = low_first[p2pos];
                if (a == b) continue;
                if (evaluated.count({std::min(a, b), std::max(a, b)})) continue;
                if (!(ratios[a].ratio > ratios[b].ratio)) continue;
                if (seconds_left(deadline) <= 0.0) {
                    out_of_time = true;
                    break;
                }

                PairEvaluation eval;
                eval.high = a;
                eval.low = b;
                eval.before = benefit[a] + benefit[b];
                SubSolve sub = solve_subproblem(base, working, {a, b}, in, options.solver,
                                                seconds_left(deadline));
                evaluated.insert({std::min(a, b), std::max(a, b)});
                eval.timed_out = !sub.solved;
                eval.after = sub.solved ? sub.benefit : eval.before;
                if (sub.solved && sub.benefit > eval.before + 1e-9) {
                    eval.improved = true;
                    adopt_vessel(working, sub.schedule, a, in);
                    adopt_vessel(working, sub.schedule, b, in);
                    benefit[a] = vessel_objective(in, working, a);
                    benefit[b] = vessel_objective(in, working, b);
                    improved = true;
                }
                log.pairs.push_back(eval);
            }
        }
        result.report.phase2.push_back(std::move(log));
        done = !improved;  // a full scan without improvement terminates
        if (out_of_time) {
            result.report.budget_exhausted = true;
            done = true;
        }
    }

    ValidationReport check = check_schedule(in, working);
    if (!check.ok())
        throw std::logic_error("phase 2 produced an infeasible schedule:\n" +
                               check.to_json());

    result.schedule = working;
    result.report.f_phase2 = objective_recompute(in, working);
    if (result.report.f_phase2 < result.report.f_phase1 - 1e-9)
        throw std::logic_error("phase 2 lost benefit against phase 1");
    result.report.time_phase2_s = std::chrono::duration<double>(Clock::now() - start).count();
    result.report.total_time_s =
        result.report.time_phase1_s + result.report.time_phase2_s;
    return result;
}

HeuristicResult run_heuristic(std::shared_ptr<const Instance> inst,
                              std::shared_ptr<const ExpandedNetwork> net,
                              const HeuristicOptions& options) {
    auto start = Clock::now();

    // A defensible dual bound first: the full model's LP relaxation,
    // capped at a fraction of the budget so the phases keep the rest.
    double dual_bound = kInf;
    {
        MilpModel bound_model = build_model(net, inst);
        LpOptions lp_opt;
        lp_opt.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                             std::chrono::duration<double>(
                                                 std::max(0.4 * options.time_limit_s, 0.0)));
        LpRelaxation relax = lp_solve(bound_model, lp_opt);
        if (relax.status == LpStatus::Optimal) dual_bound = relax.value;
    }

    HeuristicOptions remaining = options;
    remaining.time_limit_s =
        options.time_limit_s -
        std::chrono::duration<double>(Clock::now() - start).count();
    Phase1Result p1 = phase1(inst, net, remaining);
    p1.report.dual_bound = dual_bound;

    HeuristicResult out = phase2(inst, net, std::move(p1), remaining);
    out.report.total_time_s = std::chrono::duration<double>(Clock::now() - start).count();
    return out;
}

std::string HeuristicReport::trace_text(const Instance& inst) const {
    std::ostringstream out;
    for (const auto& it : phase1) {
        out << it.label << ":";
        for (const auto& [v, f] : it.benefits) out << " f(" << inst.vessels[v].id << ")=" << f;
        if (it.fixed_vessel >= 0) out << " -> fix " << inst.vessels[it.fixed_vessel].id;
        out << "\n";
    }
    for (const auto& it : phase2) {
        if (it.pairs.empty()) {
            out << it.label << ": no eligible pairs\n";
            continue;
        }
        for (const auto& p : it.pairs) {
            out << it.label << ": pair (" << inst.vessels[p.high].id << ","
                << inst.vessels[p.low].id << ") ";
            if (p.timed_out) out << "timed out";
            else if (p.improved) out << "improved +" << (p.after - p.before);
            else out << "no improvement";
            out << "\n";
        }
    }
    return out.str();
}

std::string HeuristicReport::to_json(const Instance& inst) const {
    nlohmann::json j;
    j["f_phase1"] = f_phase1;
    j["f_phase2"] = f_phase2;
    j["time_phase1_s"] = time_phase1_s;
    j["time_phase2_s"] = time_phase2_s;
    j["total_time_s"] = total_time_s;
    if (std::isfinite(dual_bound)) j["dual_bound"] = dual_bound;
    j["fixing_order"] = nlohmann::json::array();
    for (int v : fixing_order) j["fixing_order"].push_back(inst.vessels[v].id);
    j["timed_out_vessels"] = nlohmann::json::array();
    for (int v : timed_out_vessels) j["timed_out_vessels"].push_back(inst.vessels[v].id);
    auto dump_iterations = [&](const std::vector<HeuristicIteration>& its) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& it : its) {
            nlohmann::json ji;
            ji["label"] = it.label;
            if (!it.benefits.empty()) {
                ji["benefits"] = nlohmann::json::object();
                for (const auto& [v, f] : it.benefits)
                    ji["benefits"][inst.vessels[v].id] = f;
            }
            if (it.fixed_vessel >= 0) ji["fixed"] = inst.vessels[it.fixed_vessel].id;
            if (!it.pairs.empty()) {
                ji["pairs"] = nlohmann::json::array();
                for (const auto& p : it.pairs) {
                    nlohmann::json jp;
                    jp["high"] = inst.vessels[p.high].id;
                    jp["low"] = inst.vessels[p.low].id;
                    jp["before"] = p.before;
                    jp["after"] = p.after;
                    jp["improved"] = p.improved;
                    if (p.timed_out) jp["timed_out"] = true;
                    ji["pairs"].push_back(jp);
                }
            }
            arr.push_back(ji);
        }
        return arr;
    };
    j["phase1"] = dump_iterations(phase1);
    j["phase2"] = dump_iterations(phase2);
    return j.dump(2);
}

}  // namespace shipsched

// shipsched: tramp fleet scheduling over berth time windows.
//
// Subcommands: gen (synthetic instances), solve (branch and bound),
// heuristic (two-phase decomposition), gantt (schedule rendering).
// Exit codes: 0 success, 2 validation failure, 3 timeout with incumbent,
// 4 input error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "shipsched/gantt.hpp"
#include "shipsched/heuristic.hpp"
#include "shipsched/instance.hpp"
#include "shipsched/model.hpp"
#include "shipsched/mps.hpp"
#include "shipsched/netgen.hpp"
#include "shipsched/network.hpp"
#include "shipsched/schedule.hpp"
#include "shipsched/solver.hpp"
#include "shipsched/validate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitTimeout = 3;
constexpr int kExitInput = 4;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void print_solution_tables(const std::string& name, double f, double gap_pct, double t_cpu,
                           const std::string& status, const shipsched::FleetStats& stats) {
    std::printf("%-20s %14s %9s %10s  %s\n", "Instance", "f", "GAP(%)", "T_CPU(secs)",
                "status");
    std::printf("%-20s %14.3f %9.2f %10.1f  %s\n\n", name.c_str(), f, gap_pct, t_cpu,
                status.c_str());
    std::printf("%-20s %-18s %-15s %s\n", "", "# Docks (Av-Max)", "Av. Used Cap.",
                "Cargo Satisfied");
    std::printf("%-20s %.1f - %-12d %13.0f%% %14.0f%%\n", name.c_str(), stats.avg_docks,
                stats.max_docks, 100.0 * stats.avg_used_capacity,
                100.0 * stats.cargo_satisfied);
}

int run_gen(const std::string& family, std::int64_t pallets, const std::string& seed_token,
            std::string out_path) {
    auto spec = shipsched::family_from_name(family, pallets,
                                            shipsched::seed_from_token(seed_token));
    shipsched::Instance inst = shipsched::generate(spec);
    if (out_path.empty()) out_path = family + "_" + seed_token + ".json";
    shipsched::save_instance_file(inst, out_path);
    std::int64_t total = 0;
    for (const auto& c : inst.contracts) total += c.size_pallets;
    std::printf("wrote %s: %zu vessels, %zu contracts, %zu berths, %zu windows, %lld pallets\n",
                out_path.c_str(), inst.vessels.size(), inst.contracts.size(),
                inst.berths.size(), inst.windows.size(), static_cast<long long>(total));
    return kExitOk;
}

int run_solve(const std::string& path, shipsched::SolverOptions options, bool reduce,
              bool explain_reduction, const std::string& mps_out,
              const std::string& schedule_out) {
    auto inst = std::make_shared<shipsched::Instance>(shipsched::load_instance_file(path));
    auto full = shipsched::build_network(*inst);
    shipsched::ReductionReport reduction;
    auto net = std::make_shared<shipsched::ExpandedNetwork>(
        reduce ? shipsched::reduce_network(full, *inst, &reduction) : full);
    if (explain_reduction) std::printf("%s\n", reduction.to_json(*inst).c_str());

    shipsched::MilpModel model = shipsched::build_model(net, inst);
    std::fprintf(stderr, "model: %s\n", model.stats_string().c_str());

    if (!mps_out.empty()) {
        write_file(mps_out, shipsched::export_mps(model));
        write_file(mps_out + ".names", shipsched::export_name_table(model));
        std::printf("wrote %s (+.names)\n", mps_out.c_str());
    }

    shipsched::SolveResult res = shipsched::solve(model, options);
    if (res.status == shipsched::SolveStatus::Infeasible) {
        std::printf("status: infeasible\n");
        return kExitOk;
    }
    if (!res.has_incumbent) {
        std::printf("status: %s, no incumbent (bound %.3f)\n",
                    shipsched::to_string(res.status).c_str(), res.bound);
        return kExitTimeout;
    }

    shipsched::Schedule schedule = shipsched::extract_schedule(model, res.assignment);
    auto report = shipsched::check_schedule(*inst, schedule);
    if (!report.ok()) {
        std::fprintf(stderr, "solver schedule failed validation:\n%s\n",
                     report.to_json().c_str());
        return kExitValidation;
    }
    double f = shipsched::objective_recompute(*inst, schedule);
    double gap_pct = 100.0 * shipsched::relative_gap(res.bound, f);
    print_solution_tables(path, f, gap_pct, res.wall_time_s,
                          shipsched::to_string(res.status), shipsched::fleet_stats(*inst, schedule));
    std::printf("\nnodes: %ld, LP iterations: %ld, bound: %.3f\n", res.nodes,
                res.lp_iterations, res.bound);

    if (!schedule_out.empty()) {
        write_file(schedule_out, shipsched::schedule_to_json(schedule, *inst));
        std::printf("wrote %s\n", schedule_out.c_str());
    }
    return res.status == shipsched::SolveStatus::Optimal ? kExitOk : kExitTimeout;
}

int run_heuristic_cmd(const std::string& path, shipsched::HeuristicOptions options,
                      bool trace, const std::string& schedule_out,
                      const std::string& report_out) {
    auto inst = std::make_shared<shipsched::Instance>(shipsched::load_instance_file(path));
    auto net = std::make_shared<shipsched::ExpandedNetwork>(
        shipsched::reduce_network(shipsched::build_network(*inst), *inst));

    shipsched::HeuristicResult res = shipsched::run_heuristic(inst, net, options);
    if (trace) std::printf("%s", res.report.trace_text(*inst).c_str());

    double f1 = shipsched::objective_recompute(*inst, res.schedule_phase1);
    double f2 = shipsched::objective_recompute(*inst, res.schedule);
    double gap_pct = std::isfinite(res.report.dual_bound)
                         ? 100.0 * shipsched::relative_gap(res.report.dual_bound, f2)
                         : std::nan("");
    std::printf("%-20s %12s %12s %12s %8s %8s %8s\n", "Instance", "f(H1)", "f(H2)",
                "GAP(%)vsLP", "H1", "H2", "HT");
    std::printf("%-20s %12.3f %12.3f %12.2f %8.1f %8.1f %8.1f\n\n", path.c_str(), f1, f2,
                gap_pct, res.report.time_phase1_s, res.report.time_phase2_s,
                res.report.total_time_s);
    auto stats = shipsched::fleet_stats(*inst, res.schedule);
    std::printf("%-20s %-18s %-15s %s\n", "", "# Docks (Av-Max)", "Av. Used Cap.",
                "Cargo Satisfied");
    std::printf("%-20s %.1f - %-12d %13.0f%% %14.0f%%\n", path.c_str(), stats.avg_docks,
                stats.max_docks, 100.0 * stats.avg_used_capacity,
                100.0 * stats.cargo_satisfied);

    if (!schedule_out.empty())
        write_file(schedule_out, shipsched::schedule_to_json(res.schedule, *inst));
    if (!report_out.empty()) write_file(report_out, res.report.to_json(*inst));
    return res.report.budget_exhausted ? kExitTimeout : kExitOk;
}

int run_gantt(const std::string& schedule_path, const std::string& instance_path,
              const std::string& out_path, bool text) {
    shipsched::Instance inst = shipsched::load_instance_file(instance_path);
    shipsched::Schedule schedule =
        shipsched::schedule_from_json(read_file(schedule_path), inst);
    auto report = shipsched::check_schedule(inst, schedule);
    if (!report.ok()) {
        std::fprintf(stderr, "schedule fails validation, refusing to render:\n%s\n",
                     report.to_json().c_str());
        return kExitValidation;
    }
    std::string rendered = text ? shipsched::render_gantt_text(inst, schedule)
                                : shipsched::render_gantt_svg(inst, schedule);
    if (out_path.empty() || out_path == "-") std::printf("%s", rendered.c_str());
    else {
        write_file(out_path, rendered);
        std::printf("wrote %s\n", out_path.c_str());
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tramp fleet scheduling over berth time windows"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a synthetic instance family member");
    std::string family, seed_token = "1", gen_out;
    std::int64_t pallets = 0;
    gen->add_option("family", family, "family name, e.g. S4B5W2C18")->required();
    gen->add_option("--pallets", pallets, "total pallets across all contracts")->required();
    gen->add_option("--seed", seed_token, "integer or letter A-D");
    gen->add_option("-o,--out", gen_out, "output path (default <family>_<seed>.json)");

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "solve the full model by branch and bound");
    std::string solve_path, mps_out, solve_schedule_out, branching = "most-fractional";
    double time_limit = 1800.0, gap_target = 1e-6;
    bool no_reduce = false, explain_reduction = false;
    solve_cmd->add_option("instance", solve_path, "instance JSON")->required();
    solve_cmd->add_option("--time-limit", time_limit, "seconds (default 1800)");
    solve_cmd->add_option("--gap-target", gap_target, "relative gap target");
    solve_cmd->add_option("--branching", branching,
                          "most-fractional (default) or pseudo-cost")
        ->check(CLI::IsMember({"most-fractional", "pseudo-cost"}));
    solve_cmd->add_option("--mps-out", mps_out, "write the model in MPS format");
    solve_cmd->add_option("--schedule-out", solve_schedule_out, "write the schedule JSON");
    solve_cmd->add_flag("--no-reduce", no_reduce, "skip the time-window reduction rules");
    solve_cmd->add_flag("--explain-reduction", explain_reduction,
                        "print the reduction report JSON");

    // heuristic
    auto* heur = app.add_subcommand("heuristic", "two-phase decomposition heuristic");
    std::string heur_path, heur_schedule_out, heur_report_out;
    double heur_limit = 1800.0;
    bool trace = false;
    heur->add_option("instance", heur_path, "instance JSON")->required();
    heur->add_option("--time-limit", heur_limit, "seconds for both phases (default 1800)");
    std::string heur_branching = "most-fractional";
    heur->add_option("--branching", heur_branching,
                     "sub-solve branching: most-fractional (default) or pseudo-cost")
        ->check(CLI::IsMember({"most-fractional", "pseudo-cost"}));
    heur->add_flag("--trace", trace, "print the IT 1.k / IT 2.k trace");
    heur->add_option("--schedule-out", heur_schedule_out, "write the schedule JSON");
    heur->add_option("--report-out", heur_report_out, "write the heuristic report JSON");

    // gantt
    auto* gantt = app.add_subcommand("gantt", "render a schedule");
    std::string gantt_schedule, gantt_instance, gantt_out;
    bool gantt_text = false;
    gantt->add_option("schedule", gantt_schedule, "schedule JSON")->required();
    gantt->add_option("instance", gantt_instance, "instance JSON")->required();
    gantt->add_option("-o,--out", gantt_out, "output file ('-' for stdout)");
    gantt->add_flag("--text", gantt_text, "plain text instead of SVG");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*gen) return run_gen(family, pallets, seed_token, gen_out);
        if (*solve_cmd) {
            shipsched::SolverOptions options;
            options.time_limit_s = time_limit;
            options.rel_gap_target = gap_target;
            if (branching == "pseudo-cost")
                options.branching = shipsched::SolverOptions::Branching::PseudoCost;
            options = options.with_env_overrides();
            return run_solve(solve_path, options, !no_reduce, explain_reduction, mps_out,
                             solve_schedule_out);
        }
        if (*heur) {
            shipsched::HeuristicOptions options;
            options.time_limit_s = heur_limit;
            if (heur_branching == "pseudo-cost")
                options.solver.branching =
                    shipsched::SolverOptions::Branching::PseudoCost;
            shipsched::SolverOptions env_probe;
            env_probe.time_limit_s = heur_limit;
            options.time_limit_s = env_probe.with_env_overrides().time_limit_s;
            return run_heuristic_cmd(heur_path, options, trace, heur_schedule_out,
                                     heur_report_out);
        }
        if (*gantt) return run_gantt(gantt_schedule, gantt_instance, gantt_out, gantt_text);
    } catch (const shipsched::ParseError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return kExitInput;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInput;
    }
    return kExitInput;
}

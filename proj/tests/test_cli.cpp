#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "shipsched/instance.hpp"
#include "shipsched/mps.hpp"
#include "shipsched/schedule.hpp"

#include "breakers.hpp"
#include "helpers.hpp"

using namespace shipsched;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    fs::path log = fs::path("cli_out_" + std::to_string(counter++) + ".log");
    std::string command = std::string(SHIPSCHED_CLI_PATH) + " " + args + " > " +
                          log.string() + " 2>&1";
    int raw = std::system(command.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream in(log);
    std::ostringstream buf;
    buf << in.rdbuf();
    r.output = buf.str();
    fs::remove(log);
    return r;
}

std::string write_temp(const std::string& name, const std::string& content) {
    std::ofstream out(name, std::ios::binary);
    out << content;
    return name;
}

}  // namespace

TEST_CASE("gen writes an instance hitting the pallet total") {
    RunResult r = run_cli("gen S4B5W2C18 --pallets 22189 --seed 1 -o cli_gen.json");
    CHECK(r.exit_code == 0);
    Instance inst = load_instance_file("cli_gen.json");
    std::int64_t total = 0;
    for (const auto& c : inst.contracts) total += c.size_pallets;
    CHECK(total == 22189);
    CHECK(inst.vessels.size() == 4);
    fs::remove("cli_gen.json");
}

TEST_CASE("gen without --pallets fails with usage") {
    RunResult r = run_cli("gen S4B5W2C18");
    CHECK(r.exit_code == 4);
    CHECK(r.output.find("--pallets") != std::string::npos);
}

TEST_CASE("gen rejects malformed family names") {
    RunResult r = run_cli("gen X4B5 --pallets 100");
    CHECK(r.exit_code == 4);
    CHECK(r.output.find("malformed") != std::string::npos);
}

TEST_CASE("solve prints the report tables and exports MPS") {
    write_temp("cli_desk.json", save_instance(testing::desk_instance()));
    RunResult r = run_cli(
        "solve cli_desk.json --mps-out cli_desk.mps --schedule-out cli_desk_sched.json");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("GAP(%)") != std::string::npos);
    CHECK(r.output.find("818") != std::string::npos);
    CHECK(r.output.find("Cargo Satisfied") != std::string::npos);
    CHECK(r.output.find("optimal") != std::string::npos);

    // The exported MPS round-trips byte for byte.
    std::ifstream in("cli_desk.mps");
    std::ostringstream buf;
    buf << in.rdbuf();
    MilpModel imported = import_mps(buf.str());
    CHECK(export_mps(imported) == buf.str());

    // The schedule file loads back against the instance.
    std::ifstream sin("cli_desk_sched.json");
    std::ostringstream sbuf;
    sbuf << sin.rdbuf();
    Instance inst = load_instance_file("cli_desk.json");
    Schedule s = schedule_from_json(sbuf.str(), inst);
    CHECK(s.vessels.size() == 1);

    fs::remove("cli_desk.json");
    fs::remove("cli_desk.mps");
    fs::remove("cli_desk.mps.names");
    fs::remove("cli_desk_sched.json");
}

TEST_CASE("solve on a bad instance is an input error") {
    write_temp("cli_bad.json", "{ this is not json");
    RunResult r = run_cli("solve cli_bad.json");
    CHECK(r.exit_code == 4);
    fs::remove("cli_bad.json");
}

TEST_CASE("solve accepts --explain-reduction") {
    write_temp("cli_fig1.json", save_instance(testing::fig1_instance()));
    RunResult r = run_cli("solve cli_fig1.json --explain-reduction --time-limit 60");
    CHECK((r.exit_code == 0 || r.exit_code == 3));
    CHECK(r.output.find("arcs_removed") != std::string::npos);
    fs::remove("cli_fig1.json");
}

TEST_CASE("heuristic prints phase benefits and the trace") {
    write_temp("cli_p1.json", save_instance(testing::phase1_trace_instance()));
    RunResult r = run_cli("heuristic cli_p1.json --trace");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("IT 1.1") != std::string::npos);
    CHECK(r.output.find("IT 2.1") != std::string::npos);
    CHECK(r.output.find("f(H1)") != std::string::npos);
    CHECK(r.output.find("f(H2)") != std::string::npos);
    CHECK(r.output.find("6800") != std::string::npos);
    CHECK(r.output.find("6860") != std::string::npos);
    fs::remove("cli_p1.json");
}

TEST_CASE("gantt renders valid schedules and refuses broken ones") {
    Instance inst = testing::breaker_instance();
    write_temp("cli_brk.json", save_instance(inst));

    SUBCASE("idle fleet gives frames only") {
        write_temp("cli_idle_sched.json",
                   schedule_to_json(idle_fleet_schedule(inst), inst));
        RunResult r = run_cli("gantt cli_idle_sched.json cli_brk.json -o cli_idle.svg");
        CHECK(r.exit_code == 0);
        std::ifstream in("cli_idle.svg");
        std::ostringstream buf;
        buf << in.rdbuf();
        CHECK(buf.str().find("<svg") != std::string::npos);
        CHECK(buf.str().find("W1") != std::string::npos);
        fs::remove("cli_idle_sched.json");
        fs::remove("cli_idle.svg");
    }
    SUBCASE("text mode renders window rows") {
        write_temp("cli_idle_sched.json",
                   schedule_to_json(idle_fleet_schedule(inst), inst));
        RunResult r = run_cli("gantt cli_idle_sched.json cli_brk.json --text -o -");
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("W1") != std::string::npos);
        CHECK(r.output.find("idle") != std::string::npos);
        fs::remove("cli_idle_sched.json");
    }
    SUBCASE("infeasible schedule: violations listed, exit 2") {
        write_temp("cli_broken_sched.json",
                   schedule_to_json(testing::broken_schedule(inst, 12), inst));
        RunResult r = run_cli("gantt cli_broken_sched.json cli_brk.json -o cli_x.svg");
        CHECK(r.exit_code == 2);
        CHECK(r.output.find("\"family\": 12") != std::string::npos);
        CHECK_FALSE(fs::exists("cli_x.svg"));
        fs::remove("cli_broken_sched.json");
    }
    fs::remove("cli_brk.json");
}

TEST_CASE("two sequenced vessels render as two bars in one row") {
    Instance inst = testing::breaker_instance();
    Schedule s = idle_fleet_schedule(inst);
    Docking a;
    a.window = 0;
    a.arrive_h = 10.0;
    a.loads[0] = 50.0;
    s.vessels[0].dockings.push_back(a);
    s.vessels[0].arrive_dest_h = 20.5;
    s.shortfall[0] = 50.0;
    Docking b;
    b.window = 0;
    b.arrive_h = 11.0;
    b.loads[1] = 40.0;
    s.vessels[1].dockings.push_back(b);
    s.vessels[1].arrive_dest_h = 21.4;
    s.shortfall[1] = 60.0;

    write_temp("cli_two.json", save_instance(inst));
    write_temp("cli_two_sched.json", schedule_to_json(s, inst));
    RunResult r = run_cli("gantt cli_two_sched.json cli_two.json -o -");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("V1") != std::string::npos);
    CHECK(r.output.find("V2") != std::string::npos);
    fs::remove("cli_two.json");
    fs::remove("cli_two_sched.json");
}

TEST_CASE("the environment time limit reaches the solver") {
    write_temp("cli_env.json", save_instance(testing::fig1_instance()));
    RunResult r = run_cli("solve cli_env.json --time-limit 600");
    CHECK((r.exit_code == 0 || r.exit_code == 3));
    setenv("SCHEDULER_TIME_LIMIT_S", "0.01", 1);
    RunResult quick = run_cli("solve cli_env.json --time-limit 600");
    unsetenv("SCHEDULER_TIME_LIMIT_S");
    // With 10 ms the solver cannot finish this model: timeout exit.
    CHECK(quick.exit_code == 3);
    fs::remove("cli_env.json");
}

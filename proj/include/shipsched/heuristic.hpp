#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "shipsched/instance.hpp"
#include "shipsched/model.hpp"
#include "shipsched/network.hpp"
#include "shipsched/schedule.hpp"
#include "shipsched/solver.hpp"

namespace shipsched {

struct HeuristicOptions {
    double time_limit_s = 1800.0;   // whole heuristic, both phases
    SolverOptions solver;           // template for the sub-solves
    int threads = 0;                // 0: hardware concurrency
};

struct VesselBenefit {
    int vessel = -1;
    double benefit = 0.0;
};

struct RatioEntry {
    int vessel = -1;
    double remaining_capacity = 0.0;  // pallets
    double avg_bandwidth = 0.0;       // hours, loading-time reduced
    double ratio = 0.0;               // +inf when no bandwidth remains
};

struct PairEvaluation {
    int high = -1, low = -1;          // vessels from L1 / L2
    double before = 0.0, after = 0.0;
    bool improved = false;
    bool timed_out = false;
};

struct HeuristicIteration {
    std::string label;                     // "IT 1.2", "IT 2.1", ...
    std::map<int, double> benefits;        // phase 1: per-vessel benefit
    int fixed_vessel = -1;                 // phase 1
    std::vector<PairEvaluation> pairs;     // phase 2
};

struct HeuristicReport {
    std::vector<HeuristicIteration> phase1;
    std::vector<HeuristicIteration> phase2;
    std::vector<int> fixing_order;
    std::vector<int> timed_out_vessels;    // idled by sub-solve timeouts
    double f_phase1 = 0.0, f_phase2 = 0.0;
    double time_phase1_s = 0.0, time_phase2_s = 0.0, total_time_s = 0.0;
    double dual_bound = kInf;              // full-model LP bound, +inf if skipped
    bool budget_exhausted = false;         // ran out of time mid-phase

    std::string trace_text(const Instance& inst) const;
    std::string to_json(const Instance& inst) const;
};

struct Phase1Result {
    Schedule schedule;
    std::vector<VesselBenefit> benefits;
    std::shared_ptr<const MilpModel> base_model;
    HeuristicReport report;
};

struct HeuristicResult {
    Schedule schedule;          // after phase 2
    Schedule schedule_phase1;
    HeuristicReport report;
};

/// Phase 1: drop the vessel-pair sequencing rows, solve every free
/// vessel's single-vessel model (concurrently), fix the best one, repeat.
Phase1Result phase1(std::shared_ptr<const Instance> inst,
                    std::shared_ptr<const ExpandedNetwork> net,
                    const HeuristicOptions& options = {});

/// The phase-2 selection ratio: remaining capacity over the average
/// remaining bandwidth of the vessel's accessible windows.
RatioEntry compute_ratio(const Instance& inst, const ExpandedNetwork& net,
                         const Schedule& schedule, int vessel);

/// Phase 2: re-optimize (high ratio, low ratio) vessel pairs with the
/// rest of the fleet pinned, restarting after every improvement.
HeuristicResult phase2(std::shared_ptr<const Instance> inst,
                       std::shared_ptr<const ExpandedNetwork> net, Phase1Result phase1_result,
                       const HeuristicOptions& options = {});

/// Both phases under one time budget.
HeuristicResult run_heuristic(std::shared_ptr<const Instance> inst,
                              std::shared_ptr<const ExpandedNetwork> net,
                              const HeuristicOptions& options = {});

}  // namespace shipsched

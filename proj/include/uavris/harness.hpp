// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "uavris/agents.hpp"
#include "uavris/baselines.hpp"
#include "uavris/config.hpp"
#include "uavris/env.hpp"

namespace uavris {

inline constexpr const char* kCodeVersion = "0.1.0";

struct TrainRunOptions {
    Algo algo = Algo::kSsd3;
    int episodes = 300;
    std::uint64_t seed = 1;
    AgentHyperparams hyper;
};

// Trains one agent and writes manifest.json, train_metrics.jsonl and the
// policy checkpoint under out_dir.
TrainResult run_training(const SystemConfig& cfg, const TrainRunOptions& opt,
                         const std::string& out_dir);

struct SweepOptions {
    Algo algo = Algo::kSsd3;
    std::vector<double> sigmas{0.0, 0.1, 0.2};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    int episodes = 300;
    AgentHyperparams hyper;
    int smooth_window = 10;
    int max_parallel = 0;  // 0 = hardware concurrency
};

struct SweepCurve {
    double sigma = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> cum_reward;
    std::vector<double> smoothed;
};

struct SweepResult {
    std::vector<SweepCurve> curves;
    int smooth_window = 10;
};

// One training run per (sigma_j, seed); emits reward_curves.csv.
SweepResult run_sweep(const SystemConfig& cfg, const SweepOptions& opt, const std::string& out_dir);

struct CompareOptions {
    std::vector<Algo> algos{Algo::kSsd3, Algo::kTd3, Algo::kDdpg};
    bool include_baselines = true;
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    int episodes = 300;
    int eval_episodes = 5;
    double sigma_j = 0.1;
    std::uint64_t eval_seed_base = 77770;
    // finer than the SearchGrid defaults so the reference search covers the
    // low-power region where the harvester efficiency peaks
    SearchGrid grid{21, 41, 16};
    AgentHyperparams hyper;
    int max_parallel = 0;
};

struct MethodSummary {
    std::string method;
    double mean_eh_eff = 0.0;
    double stddev = 0.0;
    int seeds = 0;
    std::vector<double> per_seed_means;  // one entry per training seed (baselines: one)
};

struct CompareResult {
    std::vector<MethodSummary> methods;

    const MethodSummary* find(const std::string& method) const;
};

// Trains every algorithm on every seed, evaluates all methods greedily on a
// common set of held-out seeded slots, and emits eval_steps.csv + summary.csv.
CompareResult run_compare(const SystemConfig& cfg, const CompareOptions& opt,
                          const std::string& out_dir);

struct ProbeOptions {
    int trials = 50;
    std::uint64_t seed = 1;
};

struct ProbeResult {
    FeasibilityReport feasibility;
    StateLayout layout;
    int action_dim = 0;
};

// Prints the resolved configuration, dimensions, and QoS feasibility.
ProbeResult run_probe(const SystemConfig& cfg, const ProbeOptions& opt, std::ostream& out);

}  // namespace uavris

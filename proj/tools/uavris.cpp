// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: train, sweep, compare, probe.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uavris/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
};

uavris::SystemConfig load_or_die(const std::string& path) { return uavris::load_config(path); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"UAV-mounted RIS downlink simulator and actor-critic trainers"};
    app.require_subcommand(1);

    CommonArgs common;
    std::string algo = "ssd3";
    int episodes = 300;
    std::uint64_t seed = 1;
    std::vector<double> sigmas{0.0, 0.1, 0.2};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    std::vector<std::string> algos{"ssd3", "td3", "ddpg"};
    bool baselines = true;
    double sigma = 0.1;
    int eval_episodes = 5;
    int probe_trials = 50;
    int max_parallel = 0;
    uavris::AgentHyperparams hyper;

    auto add_hyper_flags = [&hyper](CLI::App* cmd) {
        cmd->add_option("--gamma", hyper.gamma, "discount factor");
        cmd->add_option("--sigma-explore", hyper.sigma_explore, "exploration noise std");
        cmd->add_option("--warmup-steps", hyper.warmup_steps, "random-action steps before updates");
        cmd->add_option("--batch-size", hyper.batch_size);
        cmd->add_option("--actor-lr", hyper.actor_lr);
        cmd->add_option("--critic-lr", hyper.critic_lr);
        cmd->add_option("--beta-softmax", hyper.beta_softmax, "softmax inverse temperature");
        cmd->add_option("--lambda-ent", hyper.lambda_ent, "action-norm regularizer weight");
    };

    auto* train_cmd = app.add_subcommand("train", "train one agent and write metrics");
    train_cmd->add_option("config", common.config_path, "configuration file")->required();
    train_cmd->add_option("--algo", algo, "ddpg|td3|ssd3")->check(CLI::IsMember({"ddpg", "td3", "ssd3"}));
    train_cmd->add_option("--episodes", episodes, "training episodes");
    train_cmd->add_option("--seed", seed, "base seed");
    train_cmd->add_option("--out", common.out_dir, "output directory");
    add_hyper_flags(train_cmd);

    auto* sweep_cmd = app.add_subcommand("sweep", "train across jitter levels");
    sweep_cmd->add_option("config", common.config_path)->required();
    sweep_cmd->add_option("--algo", algo)->check(CLI::IsMember({"ddpg", "td3", "ssd3"}));
    sweep_cmd->add_option("--episodes", episodes);
    sweep_cmd->add_option("--sigmas", sigmas, "jitter std levels")->delimiter(',');
    sweep_cmd->add_option("--seeds", seeds, "training seeds")->delimiter(',');
    sweep_cmd->add_option("--out", common.out_dir);
    sweep_cmd->add_option("--max-parallel", max_parallel, "concurrent runs (0 = all cores)");
    add_hyper_flags(sweep_cmd);

    auto* compare_cmd = app.add_subcommand("compare", "train algorithms and evaluate on shared slots");
    compare_cmd->add_option("config", common.config_path)->required();
    compare_cmd->add_option("--algos", algos, "algorithms to train")->delimiter(',');
    compare_cmd->add_flag("--baselines,!--no-baselines", baselines, "include guided search and random policy");
    compare_cmd->add_option("--sigma", sigma, "jitter level used for training and evaluation");
    compare_cmd->add_option("--episodes", episodes);
    compare_cmd->add_option("--eval-episodes", eval_episodes, "held-out evaluation episodes");
    compare_cmd->add_option("--seeds", seeds)->delimiter(',');
    compare_cmd->add_option("--out", common.out_dir);
    compare_cmd->add_option("--max-parallel", max_parallel);
    add_hyper_flags(compare_cmd);

    auto* probe_cmd = app.add_subcommand("probe", "print resolved config and QoS feasibility");
    probe_cmd->add_option("config", common.config_path)->required();
    probe_cmd->add_option("--trials", probe_trials, "feasibility trials");
    probe_cmd->add_option("--seed", seed);

    CLI11_PARSE(app, argc, argv);

    try {
        const uavris::SystemConfig cfg = load_or_die(common.config_path);

        if (train_cmd->parsed()) {
            uavris::TrainRunOptions opt;
            opt.algo = uavris::algo_from_string(algo);
            opt.episodes = episodes;
            opt.seed = seed;
            opt.hyper = hyper;
            uavris::run_training(cfg, opt, common.out_dir);
            std::cout << "wrote " << common.out_dir << "/train_metrics.jsonl\n";
        } else if (sweep_cmd->parsed()) {
            uavris::SweepOptions opt;
            opt.algo = uavris::algo_from_string(algo);
            opt.sigmas = sigmas;
            opt.seeds = seeds;
            opt.episodes = episodes;
            opt.max_parallel = max_parallel;
            opt.hyper = hyper;
            uavris::run_sweep(cfg, opt, common.out_dir);
            std::cout << "wrote " << common.out_dir << "/reward_curves.csv\n";
        } else if (compare_cmd->parsed()) {
            uavris::CompareOptions opt;
            opt.algos.clear();
            for (const auto& name : algos) opt.algos.push_back(uavris::algo_from_string(name));
            opt.include_baselines = baselines;
            opt.sigma_j = sigma;
            opt.episodes = episodes;
            opt.eval_episodes = eval_episodes;
            opt.seeds = seeds;
            opt.max_parallel = max_parallel;
            opt.hyper = hyper;
            const uavris::CompareResult result = uavris::run_compare(cfg, opt, common.out_dir);
            std::cout << "method            mean_eh_eff      std  seeds\n";
            for (const auto& m : result.methods) {
                std::printf("%-16s %12.6f %8.4f %6d\n", m.method.c_str(), m.mean_eh_eff, m.stddev,
                            m.seeds);
            }
            std::cout << "wrote " << common.out_dir << "/summary.csv\n";
        } else if (probe_cmd->parsed()) {
            uavris::ProbeOptions opt;
            opt.trials = probe_trials;
            opt.seed = seed;
            uavris::run_probe(cfg, opt, std::cout);
        }
    } catch (const uavris::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntimeError;
    }
    return kExitOk;
}

// SPDX-License-Identifier: Apache-2.0
#include "uavris/harness.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "uavris/seeding.hpp"
#include "uavris/stats.hpp"

namespace uavris {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

json config_to_json(const SystemConfig& cfg) {
    json users = json::array();
    for (const auto& u : cfg.users) users.push_back({u.x, u.y, u.z});
    return json{{"area_side", cfg.area_side},
                {"q_bs", {cfg.q_bs.x, cfg.q_bs.y, cfg.q_bs.z}},
                {"q_ris", {cfg.q_ris.x, cfg.q_ris.y, cfg.q_ris.z}},
                {"users", users},
                {"user_seed", cfg.user_seed},
                {"bs_array", {{"M_y", cfg.bs_array.n_first},
                              {"M_z", cfg.bs_array.n_second},
                              {"spacing_y", cfg.bs_array.spacing_first},
                              {"spacing_z", cfg.bs_array.spacing_second}}},
                {"ris_array", {{"N_x", cfg.ris_array.n_first},
                               {"N_y", cfg.ris_array.n_second},
                               {"spacing_x", cfg.ris_array.spacing_first},
                               {"spacing_y", cfg.ris_array.spacing_second}}},
                {"wavelength", cfg.wavelength},
                {"beta0", cfg.beta0},
                {"a", cfg.atg_a},
                {"b", cfg.atg_b},
                {"rician_k", cfg.rician_k},
                {"ris_user_pl_exp", cfg.ris_user_pl_exp},
                {"noise_power", cfg.noise_power},
                {"bandwidth", cfg.bandwidth},
                {"P_BS_max", cfg.p_bs_max},
                {"P_U_max", cfg.p_u_max},
                {"R_min", cfg.r_min},
                {"P_sat", cfg.p_sat},
                {"c", cfg.eh_c},
                {"d", cfg.eh_d},
                {"sigma_j", cfg.sigma_j},
                {"T", cfg.slots_per_episode}};
}

json hyper_to_json(const AgentHyperparams& h) {
    return json{{"gamma", h.gamma},
                {"rho", h.rho},
                {"sigma_explore", h.sigma_explore},
                {"sigma_target", h.sigma_target},
                {"noise_clip", h.noise_clip},
                {"beta_softmax", h.beta_softmax},
                {"lambda_ent", h.lambda_ent},
                {"batch_size", h.batch_size},
                {"policy_delay", h.policy_delay},
                {"replay_capacity", h.replay_capacity},
                {"warmup_steps", h.warmup_steps},
                {"hidden", h.hidden},
                {"actor_lr", h.actor_lr},
                {"critic_lr", h.critic_lr}};
}

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_manifest(const fs::path& path, json manifest) {
    manifest["code_version"] = kCodeVersion;
    manifest["timestamp"] = timestamp_utc();
    write_text(path, manifest.dump(2) + "\n");
}

void write_train_metrics(const fs::path& path, const TrainResult& result) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (const auto& ep : result.episodes) {
        const json line{{"episode", ep.episode},         {"cum_reward", ep.cum_reward},
                        {"mean_eh_eff", ep.mean_eh_eff}, {"qos_rate", ep.qos_rate},
                        {"critic_loss", ep.critic_loss}, {"actor_loss", ep.actor_loss},
                        {"mean_rates", ep.mean_rates},   {"eh_eff_steps", ep.eh_eff_steps}};
        out << line.dump() << "\n";
    }
}

void run_parallel(std::vector<std::function<void()>>& tasks, int max_parallel) {
    if (max_parallel <= 0)
        max_parallel = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            tasks[i]();
        }
    };
    const int n_threads = std::min<int>(max_parallel, static_cast<int>(tasks.size()));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void log_progress(const std::string& message) {
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    std::cerr << message << "\n";
}

// Greedy episode rollouts; returns per-episode, per-step QoS-gated efficiency.
std::vector<std::vector<double>> eval_agent_on_slots(RisEnv& env, Agent& agent,
                                                     const std::vector<std::uint64_t>& ep_seeds) {
    std::mt19937_64 dummy(0);
    std::vector<std::vector<double>> trace;
    trace.reserve(ep_seeds.size());
    for (const auto seed : ep_seeds) {
        std::vector<double> state = env.reset(seed);
        std::vector<double> rewards;
        bool done = false;
        while (!done) {
            const StepResult out = env.step_raw(agent.act(state, false, dummy));
            rewards.push_back(out.reward);
            state = out.next_state;
            done = out.done;
        }
        trace.push_back(std::move(rewards));
    }
    return trace;
}

std::vector<std::vector<double>> eval_callable_on_slots(
    RisEnv& env, const std::vector<std::uint64_t>& ep_seeds,
    const std::function<Action(const ChannelRealization&)>& policy) {
    std::vector<std::vector<double>> trace;
    trace.reserve(ep_seeds.size());
    for (const auto seed : ep_seeds) {
        env.reset(seed);
        std::vector<double> rewards;
        bool done = false;
        while (!done) {
            const Action a = policy(env.current_realization());
            const StepResult out = env.step(a);
            rewards.push_back(out.reward);
            done = out.done;
        }
        trace.push_back(std::move(rewards));
    }
    return trace;
}

double trace_mean(const std::vector<std::vector<double>>& trace) {
    double acc = 0.0;
    size_t n = 0;
    for (const auto& ep : trace)
        for (double r : ep) {
            acc += r;
            ++n;
        }
    return n == 0 ? 0.0 : acc / static_cast<double>(n);
}

}  // namespace

const MethodSummary* CompareResult::find(const std::string& method) const {
    for (const auto& m : methods)
        if (m.method == method) return &m;
    return nullptr;
}

TrainResult run_training(const SystemConfig& cfg, const TrainRunOptions& opt,
                         const std::string& out_dir) {
    opt.hyper.validate();
    cfg.validate();
    fs::create_directories(out_dir);

    RisEnv env(cfg);
    auto agent = make_agent(opt.algo, env.state_dim(), env.action_dim(), env.state_scale(),
                            opt.hyper, opt.seed);
    const TrainResult result = train(env, *agent, opt.hyper, opt.episodes, opt.seed);

    write_manifest(fs::path(out_dir) / "manifest.json",
                   json{{"kind", "train"},
                        {"algo", algo_name(opt.algo)},
                        {"episodes", opt.episodes},
                        {"seed", opt.seed},
                        {"config", config_to_json(cfg)},
                        {"hyperparams", hyper_to_json(opt.hyper)}});
    write_train_metrics(fs::path(out_dir) / "train_metrics.jsonl", result);
    agent->save((fs::path(out_dir) / "policy").string());
    return result;
}

SweepResult run_sweep(const SystemConfig& cfg, const SweepOptions& opt, const std::string& out_dir) {
    opt.hyper.validate();
    fs::create_directories(out_dir);

    struct Task {
        double sigma;
        std::uint64_t seed;
        TrainResult result;
    };
    std::vector<Task> runs;
    for (double sigma : opt.sigmas)
        for (const auto seed : opt.seeds) runs.push_back({sigma, seed, {}});

    std::vector<std::function<void()>> tasks;
    tasks.reserve(runs.size());
    for (auto& run : runs)
        tasks.push_back([&cfg, &opt, &run, &out_dir] {
            SystemConfig sub = cfg;
            sub.sigma_j = run.sigma;
            char dir[64];
            std::snprintf(dir, sizeof(dir), "sigma_%g/seed_%llu", run.sigma,
                          static_cast<unsigned long long>(run.seed));
            TrainRunOptions topt;
            topt.algo = opt.algo;
            topt.episodes = opt.episodes;
            topt.seed = run.seed;
            topt.hyper = opt.hyper;
            run.result = run_training(sub, topt, (fs::path(out_dir) / dir).string());
            log_progress("sweep: done " + std::string(dir));
        });
    run_parallel(tasks, opt.max_parallel);

    SweepResult result;
    result.smooth_window = opt.smooth_window;
    for (const auto& run : runs) {
        SweepCurve curve;
        curve.sigma = run.sigma;
        curve.seed = run.seed;
        for (const auto& ep : run.result.episodes) curve.cum_reward.push_back(ep.cum_reward);
        curve.smoothed = moving_average(curve.cum_reward, opt.smooth_window);
        result.curves.push_back(std::move(curve));
    }

    std::ofstream csv(fs::path(out_dir) / "reward_curves.csv");
    csv << "# smoothing_window = " << opt.smooth_window << "\n";
    csv << "sigma_j,seed,episode,cum_reward,smoothed\n";
    for (const auto& curve : result.curves)
        for (size_t e = 0; e < curve.cum_reward.size(); ++e)
            csv << format_double(curve.sigma) << "," << curve.seed << "," << e << ","
                << format_double(curve.cum_reward[e]) << "," << format_double(curve.smoothed[e])
                << "\n";

    write_manifest(fs::path(out_dir) / "manifest.json",
                   json{{"kind", "sweep"},
                        {"algo", algo_name(opt.algo)},
                        {"episodes", opt.episodes},
                        {"sigmas", opt.sigmas},
                        {"seeds", opt.seeds},
                        {"smooth_window", opt.smooth_window},
                        {"config", config_to_json(cfg)},
                        {"hyperparams", hyper_to_json(opt.hyper)}});
    return result;
}

CompareResult run_compare(const SystemConfig& cfg, const CompareOptions& opt,
                          const std::string& out_dir) {
    opt.hyper.validate();
    fs::create_directories(out_dir);

    SystemConfig eval_cfg = cfg;
    eval_cfg.sigma_j = opt.sigma_j;

    std::vector<std::uint64_t> ep_seeds;
    for (int e = 0; e < opt.eval_episodes; ++e)
        ep_seeds.push_back(mix_seed(opt.eval_seed_base, static_cast<std::uint64_t>(e)));

    struct AgentRun {
        Algo algo;
        std::uint64_t seed;
        std::vector<std::vector<double>> trace;
        double mean = 0.0;
    };
    std::vector<AgentRun> runs;
    for (const auto algo : opt.algos)
        for (const auto seed : opt.seeds) runs.push_back({algo, seed, {}, 0.0});

    std::vector<std::function<void()>> tasks;
    for (auto& run : runs)
        tasks.push_back([&, &run = run] {
            TrainRunOptions topt;
            topt.algo = run.algo;
            topt.episodes = opt.episodes;
            topt.seed = run.seed;
            topt.hyper = opt.hyper;
            char dir[64];
            std::snprintf(dir, sizeof(dir), "runs/%s_seed%llu", algo_name(run.algo).c_str(),
                          static_cast<unsigned long long>(run.seed));
            RisEnv env(eval_cfg);
            auto agent = make_agent(run.algo, env.state_dim(), env.action_dim(), env.state_scale(),
                                    opt.hyper, run.seed);
            const TrainResult tr = train(env, *agent, opt.hyper, opt.episodes, run.seed);
            const fs::path run_dir = fs::path(out_dir) / dir;
            fs::create_directories(run_dir);
            write_train_metrics(run_dir / "train_metrics.jsonl", tr);
            agent->save((run_dir / "policy").string());

            RisEnv eval_env(eval_cfg);
            run.trace = eval_agent_on_slots(eval_env, *agent, ep_seeds);
            run.mean = trace_mean(run.trace);
            log_progress("compare: done " + std::string(dir) +
                         " (held-out mean " + format_double(run.mean) + ")");
        });

    // baseline traces on the same slots
    std::vector<std::vector<double>> guided_trace, random_trace;
    if (opt.include_baselines) {
        tasks.push_back([&] {
            RisEnv env(eval_cfg);
            guided_trace = eval_callable_on_slots(env, ep_seeds, [&](const ChannelRealization& real) {
                return guided_search(real, opt.grid, eval_cfg).action;
            });
            log_progress("compare: done guided_search baseline");
        });
        tasks.push_back([&] {
            RisEnv env(eval_cfg);
            std::mt19937_64 rng(mix_seed(opt.eval_seed_base, 0xBADull));
            random_trace = eval_callable_on_slots(env, ep_seeds, [&](const ChannelRealization& real) {
                return random_policy(real, eval_cfg, rng).action;
            });
        });
    }
    run_parallel(tasks, opt.max_parallel);

    // per-method aggregation
    CompareResult result;
    std::ofstream steps(fs::path(out_dir) / "eval_steps.csv");
    steps << "method,slot,step,eh_efficiency\n";
    auto dump_trace = [&](const std::string& method, const std::vector<std::vector<double>>& trace) {
        for (size_t e = 0; e < trace.size(); ++e)
            for (size_t s = 0; s < trace[e].size(); ++s)
                steps << method << "," << e << "," << s << "," << format_double(trace[e][s]) << "\n";
    };

    for (const auto algo : opt.algos) {
        MethodSummary summary;
        summary.method = algo_name(algo);
        for (const auto& run : runs)
            if (run.algo == algo) {
                summary.per_seed_means.push_back(run.mean);
                dump_trace(summary.method, run.trace);
            }
        summary.seeds = static_cast<int>(summary.per_seed_means.size());
        summary.mean_eh_eff = mean(summary.per_seed_means);
        summary.stddev = sample_stddev(summary.per_seed_means);
        result.methods.push_back(std::move(summary));
    }
    if (opt.include_baselines) {
        auto add_baseline = [&](const std::string& method, const std::vector<std::vector<double>>& trace) {
            MethodSummary summary;
            summary.method = method;
            summary.per_seed_means.push_back(trace_mean(trace));
            summary.seeds = 1;
            summary.mean_eh_eff = summary.per_seed_means[0];
            summary.stddev = 0.0;
            dump_trace(method, trace);
            result.methods.push_back(std::move(summary));
        };
        add_baseline("guided_search", guided_trace);
        add_baseline("random", random_trace);
    }

    std::ofstream summary_csv(fs::path(out_dir) / "summary.csv");
    summary_csv << "method,mean_eh_eff,std,seeds\n";
    for (const auto& m : result.methods)
        summary_csv << m.method << "," << format_double(m.mean_eh_eff) << ","
                    << format_double(m.stddev) << "," << m.seeds << "\n";

    json algos = json::array();
    for (const auto algo : opt.algos) algos.push_back(algo_name(algo));
    write_manifest(fs::path(out_dir) / "manifest.json",
                   json{{"kind", "compare"},
                        {"algos", algos},
                        {"seeds", opt.seeds},
                        {"episodes", opt.episodes},
                        {"sigma_j", opt.sigma_j},
                        {"eval_episodes", opt.eval_episodes},
                        {"eval_seed_base", opt.eval_seed_base},
                        {"eval_episode_seeds", ep_seeds},
                        {"include_baselines", opt.include_baselines},
                        {"grid", {{"tau_levels", opt.grid.tau_levels},
                                  {"power_levels", opt.grid.power_levels},
                                  {"phase_levels", opt.grid.phase_levels}}},
                        {"config", config_to_json(eval_cfg)},
                        {"hyperparams", hyper_to_json(opt.hyper)}});
    return result;
}

ProbeResult run_probe(const SystemConfig& cfg, const ProbeOptions& opt, std::ostream& out) {
    cfg.validate();
    ProbeResult result;
    result.layout = state_layout(cfg);
    result.action_dim = 1 + cfg.num_users() + cfg.ris_count();

    std::mt19937_64 rng(opt.seed);
    result.feasibility = feasibility_probe(cfg, opt.trials, rng);

    out << "resolved configuration (linear units):\n";
    out << "  area = " << cfg.area_side << " m\n";
    out << "  K = " << cfg.num_users() << "\n";
    out << "  N = " << cfg.ris_count() << " (N_x = " << cfg.ris_array.n_first
        << ", N_y = " << cfg.ris_array.n_second << ")\n";
    out << "  M = " << cfg.bs_count() << " (M_y = " << cfg.bs_array.n_first
        << ", M_z = " << cfg.bs_array.n_second << ")\n";
    out << "  a = " << cfg.atg_a << ", b = " << cfg.atg_b << "\n";
    out << "  beta0 = " << format_double(cfg.beta0) << " (linear)\n";
    out << "  sigma_k2 = " << format_double(cfg.noise_power) << " W\n";
    out << "  P_BS_max = " << format_double(cfg.p_bs_max) << " W\n";
    out << "  P_U_max = " << format_double(cfg.p_u_max) << " W\n";
    out << "  R_min = " << format_double(cfg.r_min) << " bit/s\n";
    out << "  B = " << format_double(cfg.bandwidth) << " Hz\n";
    out << "  c = " << format_double(cfg.eh_c) << ", d = " << format_double(cfg.eh_d) << "\n";
    out << "  P_sat = " << format_double(cfg.p_sat) << " W\n";
    out << "  K_H = " << format_double(cfg.rician_k) << " (linear)\n";
    out << "  wavelength = " << format_double(cfg.wavelength) << " m\n";
    out << "  sigma_j = " << format_double(cfg.sigma_j) << " rad\n";
    out << "  T = " << cfg.slots_per_episode << "\n";
    out << "  q_BS = (" << cfg.q_bs.x << ", " << cfg.q_bs.y << ", " << cfg.q_bs.z << ")\n";
    out << "  q_RIS = (" << cfg.q_ris.x << ", " << cfg.q_ris.y << ", " << cfg.q_ris.z << ")\n";
    for (int k = 0; k < cfg.num_users(); ++k)
        out << "  user" << k + 1 << " = (" << cfg.users[static_cast<size_t>(k)].x << ", "
            << cfg.users[static_cast<size_t>(k)].y << ", 0)\n";
    out << "state_dim = " << result.layout.dim << "\n";
    out << "action_dim = " << result.action_dim << "\n";
    out << "qos_feasibility = " << result.feasibility.fraction << " (" << result.feasibility.trials
        << " trials at tau = 0, full power)\n";
    if (result.feasibility.warn)
        out << "warning: QoS feasible in fewer than half the sampled slots; rewards will be "
               "mostly zero under this configuration\n";
    return result;
}

}  // namespace uavris

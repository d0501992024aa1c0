// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "uavris/harness.hpp"
#include "uavris/stats.hpp"

using namespace uavris;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// small instance that trains in milliseconds
SystemConfig fast_cfg() {
    SystemConfig cfg = default_config(1, 2);
    cfg.ris_array = {2, 1, cfg.wavelength / 2, cfg.wavelength / 2};
    cfg.bs_array = {1, 1, cfg.wavelength / 2, cfg.wavelength / 2};
    cfg.r_min = 0.0;
    cfg.slots_per_episode = 5;
    return cfg;
}

AgentHyperparams fast_hyper() {
    AgentHyperparams h;
    h.hidden = {8, 8};
    h.batch_size = 8;
    h.warmup_steps = 5;
    return h;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("moving average and slope") {
    const std::vector<double> v{1, 2, 3, 4, 5};
    const auto ma = moving_average(v, 2);
    CHECK(ma[0] == 1.0);
    CHECK(ma[1] == doctest::Approx(1.5));
    CHECK(ma[4] == doctest::Approx(4.5));

    std::vector<double> line;
    for (int i = 0; i < 10; ++i) line.push_back(3.0 + 2.0 * i);
    CHECK(linear_slope(line) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(linear_slope({5.0, 5.0, 5.0}) == 0.0);
}

TEST_CASE("wilcoxon exact small cases") {
    // all five differences positive: p = 1/32
    const std::vector<double> x{1.1, 2.3, 0.7, 1.9, 3.0};
    const std::vector<double> y{0.9, 1.8, 0.4, 1.2, 2.1};
    CHECK(wilcoxon_signed_rank_greater(x, y) == doctest::Approx(1.0 / 32).epsilon(1e-12));

    // diffs {+3, +2, -1}: W+ = 5, p = P(W >= 5) = 2/8
    CHECK(wilcoxon_signed_rank_greater({3.0, 2.0, 0.0}, {0.0, 0.0, 1.0}) ==
          doctest::Approx(0.25).epsilon(1e-12));

    // identical samples carry no evidence
    CHECK(wilcoxon_signed_rank_greater({1.0, 2.0}, {1.0, 2.0}) == 1.0);
}

TEST_CASE("config loads from disk and rejects a missing file") {
    TempDir tmp("uavris_cfg_test");
    const fs::path cfg_path = tmp.path / "ok.cfg";
    std::ofstream(cfg_path) << "area = 20\nK = 2\nN = 4\na = 9.61\nb = 0.16\nbeta0_db = -30\n"
                               "sigma_k2_dbm = -102\nP_BS_max = 500\nR_min_mbps = 70\n"
                               "c = 6400\nd = 0.003\n";
    const SystemConfig cfg = load_config(cfg_path.string());
    CHECK(cfg.ris_count() == 4);
    CHECK(cfg.num_users() == 2);
    CHECK_THROWS_AS(load_config((tmp.path / "missing.cfg").string()), ConfigError);
}

TEST_CASE("run_training writes manifest, metrics, and checkpoint") {
    TempDir tmp("uavris_train_test");
    TrainRunOptions opt;
    opt.algo = Algo::kDdpg;
    opt.episodes = 2;
    opt.seed = 5;
    opt.hyper = fast_hyper();
    const TrainResult result = run_training(fast_cfg(), opt, tmp.path.string());
    CHECK(result.episodes.size() == 2);
    CHECK(fs::exists(tmp.path / "manifest.json"));
    CHECK(fs::exists(tmp.path / "train_metrics.jsonl"));
    CHECK(fs::exists(tmp.path / "policy_actor.mlp"));

    const std::string manifest = slurp(tmp.path / "manifest.json");
    CHECK(manifest.find("\"algo\": \"ddpg\"") != std::string::npos);
    CHECK(manifest.find("\"seed\": 5") != std::string::npos);
    CHECK(manifest.find("\"P_BS_max\": 500.0") != std::string::npos);

    // one JSON record per line with the stable schema
    std::istringstream lines(slurp(tmp.path / "train_metrics.jsonl"));
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
        CHECK(line.find("\"episode\":") != std::string::npos);
        CHECK(line.find("\"cum_reward\":") != std::string::npos);
        CHECK(line.find("\"mean_eh_eff\":") != std::string::npos);
        CHECK(line.find("\"qos_rate\":") != std::string::npos);
        CHECK(line.find("\"mean_rates\":") != std::string::npos);
        CHECK(line.find("\"eh_eff_steps\":") != std::string::npos);
        ++count;
    }
    CHECK(count == 2);

    // per-step efficiencies stay inside the saturation bound
    for (const auto& ep : result.episodes) {
        CHECK(ep.eh_eff_steps.size() == 5);
        for (double eff : ep.eh_eff_steps) {
            CHECK(eff >= 0.0);
            CHECK(eff < 1.0);
        }
        CHECK(ep.mean_rates.size() == 1);
    }
}

TEST_CASE("an empty run still writes its manifest") {
    TempDir tmp("uavris_train_empty");
    TrainRunOptions opt;
    opt.episodes = 0;
    opt.hyper = fast_hyper();
    const TrainResult result = run_training(fast_cfg(), opt, tmp.path.string());
    CHECK(result.episodes.empty());
    CHECK(fs::exists(tmp.path / "manifest.json"));
    CHECK(slurp(tmp.path / "train_metrics.jsonl").empty());
}

TEST_CASE("identical seeds reproduce metrics byte-for-byte") {
    TempDir ta("uavris_repro_a"), tb("uavris_repro_b");
    TrainRunOptions opt;
    opt.algo = Algo::kSsd3;
    opt.episodes = 3;
    opt.seed = 11;
    opt.hyper = fast_hyper();
    run_training(fast_cfg(), opt, ta.path.string());
    run_training(fast_cfg(), opt, tb.path.string());
    CHECK(slurp(ta.path / "train_metrics.jsonl") == slurp(tb.path / "train_metrics.jsonl"));
}

TEST_CASE("sweep emits one curve per sigma-seed pair") {
    TempDir tmp("uavris_sweep_test");
    SweepOptions opt;
    opt.algo = Algo::kDdpg;
    opt.sigmas = {0.0, 0.1};
    opt.seeds = {1, 2};
    opt.episodes = 2;
    opt.hyper = fast_hyper();
    opt.max_parallel = 2;
    const SweepResult result = run_sweep(fast_cfg(), opt, tmp.path.string());
    CHECK(result.curves.size() == 4);
    for (const auto& c : result.curves) {
        CHECK(c.cum_reward.size() == 2);
        CHECK(c.smoothed.size() == 2);
    }
    const std::string csv = slurp(tmp.path / "reward_curves.csv");
    CHECK(csv.find("# smoothing_window = 10") != std::string::npos);
    CHECK(csv.find("sigma_j,seed,episode,cum_reward,smoothed") != std::string::npos);
    CHECK(fs::exists(tmp.path / "sigma_0/seed_1/train_metrics.jsonl"));
    CHECK(fs::exists(tmp.path / "sigma_0.1/seed_2/train_metrics.jsonl"));
}

TEST_CASE("compare evaluates every method on the shared slots") {
    TempDir tmp("uavris_compare_test");
    CompareOptions opt;
    opt.algos = {Algo::kDdpg, Algo::kTd3};
    opt.include_baselines = true;
    opt.seeds = {1, 2};
    opt.episodes = 2;
    opt.eval_episodes = 2;
    opt.sigma_j = 0.05;
    opt.hyper = fast_hyper();
    opt.grid = SearchGrid{5, 3, 4};
    opt.max_parallel = 2;
    const CompareResult result = run_compare(fast_cfg(), opt, tmp.path.string());
    REQUIRE(result.methods.size() == 4);
    CHECK(result.find("ddpg") != nullptr);
    CHECK(result.find("td3") != nullptr);
    CHECK(result.find("guided_search") != nullptr);
    CHECK(result.find("random") != nullptr);
    CHECK(result.find("ddpg")->seeds == 2);
    CHECK(result.find("guided_search")->seeds == 1);
    for (const auto& m : result.methods) {
        CHECK(m.mean_eh_eff >= 0.0);
        CHECK(m.mean_eh_eff <= 1.0);
    }

    const std::string steps = slurp(tmp.path / "eval_steps.csv");
    CHECK(steps.find("method,slot,step,eh_efficiency") != std::string::npos);
    CHECK(steps.find("guided_search,0,0,") != std::string::npos);
    const std::string summary = slurp(tmp.path / "summary.csv");
    CHECK(summary.find("method,mean_eh_eff,std,seeds") != std::string::npos);
    const std::string manifest = slurp(tmp.path / "manifest.json");
    CHECK(manifest.find("eval_episode_seeds") != std::string::npos);
}

TEST_CASE("compare outputs are independent of worker count") {
    TempDir ta("uavris_cmp_par1"), tb("uavris_cmp_par2");
    CompareOptions opt;
    opt.algos = {Algo::kDdpg, Algo::kSsd3};
    opt.include_baselines = true;
    opt.seeds = {3, 4};
    opt.episodes = 2;
    opt.eval_episodes = 2;
    opt.hyper = fast_hyper();
    opt.grid = SearchGrid{5, 3, 4};
    opt.max_parallel = 1;
    run_compare(fast_cfg(), opt, ta.path.string());
    opt.max_parallel = 2;
    run_compare(fast_cfg(), opt, tb.path.string());
    CHECK(slurp(ta.path / "eval_steps.csv") == slurp(tb.path / "eval_steps.csv"));
    CHECK(slurp(ta.path / "summary.csv") == slurp(tb.path / "summary.csv"));
}

TEST_CASE("probe prints the resolved table and dimensions") {
    std::ostringstream out;
    ProbeOptions opt;
    opt.trials = 3;
    const ProbeResult result = run_probe(default_config(3, 1), opt, out);
    CHECK(result.layout.dim == 301);
    CHECK(result.action_dim == 20);
    CHECK(result.feasibility.fraction >= 0.0);
    CHECK(result.feasibility.fraction <= 1.0);
    const std::string text = out.str();
    CHECK(text.find("N = 16") != std::string::npos);
    CHECK(text.find("P_BS_max = 500") != std::string::npos);
    CHECK(text.find("R_min = 70000000") != std::string::npos);
    CHECK(text.find("c = 6400, d = 0.003") != std::string::npos);
    CHECK(text.find("beta0 = 0.001") != std::string::npos);
    CHECK(text.find("state_dim = 301") != std::string::npos);
    CHECK(text.find("action_dim = 20") != std::string::npos);
}

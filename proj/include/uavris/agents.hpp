// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "uavris/env.hpp"
#include "uavris/mlp.hpp"

namespace uavris {

// Replay record; actions are stored raw (pre-scaling, in [-1,1]^dim).
struct Transition {
    std::vector<double> state;
    std::vector<double> action;
    double reward = 0.0;
    std::vector<double> next_state;
    bool done = false;
};

// Bounded FIFO store with uniform sampling.
class ReplayBuffer {
public:
    explicit ReplayBuffer(size_t capacity);

    void push(Transition t);
    size_t size() const { return data_.size(); }
    size_t capacity() const { return capacity_; }

    // index 0 is the oldest stored transition
    const Transition& at(size_t i) const;

    std::vector<size_t> sample_indices(size_t batch, std::mt19937_64& rng) const;

private:
    size_t capacity_;
    size_t next_ = 0;
    std::vector<Transition> data_;
};

struct AgentHyperparams {
    double gamma = 0.95;
    double rho = 0.005;
    double sigma_explore = 0.2;
    double sigma_target = 0.2;
    double noise_clip = 0.5;     // c, in normalized action units
    double beta_softmax = 10.0;  // softmax inverse temperature
    double lambda_ent = 1e-3;
    int batch_size = 64;
    int policy_delay = 2;
    size_t replay_capacity = 100000;
    int warmup_steps = 2000;
    std::vector<int> hidden = {256, 256};
    double actor_lr = 1e-4;
    double critic_lr = 1e-3;

    void validate() const;  // throws std::invalid_argument
};

// ---- target-value building blocks ----

// y = r, or r + gamma * next_q when the episode continues
double ddpg_target(double r, bool done, double gamma, double next_q);

// clipped double-Q target of the twin-critic scheme
double td3_target_value(double r, bool done, double gamma, double q1, double q2);

// softmax-weighted combination of the two per-actor min-critic values,
// evaluated with max subtraction
double softmax_weighted_pair(double q_min1, double q_min2, double beta);

// 0 when the first actor's value is at least the second's (ties go first)
int select_actor_index(double value1, double value2);

struct UpdateDiagnostics {
    bool updated = false;
    bool actor_updated = false;
    double critic_loss = 0.0;
    double actor_loss = 0.0;
};

class Agent {
public:
    virtual ~Agent() = default;
    virtual const std::string& name() const = 0;
    // Actor output, plus clipped Gaussian exploration noise when explore is set.
    virtual std::vector<double> act(const std::vector<double>& state, bool explore,
                                    std::mt19937_64& rng) = 0;
    virtual UpdateDiagnostics update(const ReplayBuffer& buffer, std::mt19937_64& rng) = 0;
    virtual void save(const std::string& prefix) const = 0;
};

// One actor-critic pair with its target copies and optimizers.
struct NetPair {
    MlpSpec spec;
    MlpParams online;
    MlpParams target;
    AdamState opt;
};

NetPair make_net(const MlpSpec& spec, std::mt19937_64& rng, double lr, double final_scale);

class DdpgAgent final : public Agent {
public:
    DdpgAgent(int state_dim, int action_dim, std::vector<double> state_scale,
              AgentHyperparams hyper, std::uint64_t init_seed);

    const std::string& name() const override { return name_; }
    std::vector<double> act(const std::vector<double>& state, bool explore,
                            std::mt19937_64& rng) override;
    UpdateDiagnostics update(const ReplayBuffer& buffer, std::mt19937_64& rng) override;
    void save(const std::string& prefix) const override;

    AgentHyperparams hyper;
    NetPair actor;
    NetPair critic;

private:
    std::string name_ = "ddpg";
    int state_dim_;
    int action_dim_;
    std::vector<double> inv_scale_;
    friend class TrainDriver;
};

class Td3Agent final : public Agent {
public:
    Td3Agent(int state_dim, int action_dim, std::vector<double> state_scale,
             AgentHyperparams hyper, std::uint64_t init_seed);

    const std::string& name() const override { return name_; }
    std::vector<double> act(const std::vector<double>& state, bool explore,
                            std::mt19937_64& rng) override;
    UpdateDiagnostics update(const ReplayBuffer& buffer, std::mt19937_64& rng) override;
    void save(const std::string& prefix) const override;

    // Per-sample regression targets for a batch (testing surface).
    std::vector<double> targets_for(const std::vector<const Transition*>& batch,
                                    std::mt19937_64& rng) const;

    AgentHyperparams hyper;
    NetPair actor;
    NetPair critic1;
    NetPair critic2;

private:
    std::string name_ = "td3";
    int state_dim_;
    int action_dim_;
    std::vector<double> inv_scale_;
    long update_count_ = 0;
};

class Ssd3Agent final : public Agent {
public:
    Ssd3Agent(int state_dim, int action_dim, std::vector<double> state_scale,
              AgentHyperparams hyper, std::uint64_t init_seed);

    const std::string& name() const override { return name_; }
    std::vector<double> act(const std::vector<double>& state, bool explore,
                            std::mt19937_64& rng) override;
    UpdateDiagnostics update(const ReplayBuffer& buffer, std::mt19937_64& rng) override;
    void save(const std::string& prefix) const override;

    // Actor picked by comparing each critic's value of its own actor's action.
    int select_actor(const std::vector<double>& state) const;

    std::vector<double> targets_for(const std::vector<const Transition*>& batch,
                                    std::mt19937_64& rng) const;

    AgentHyperparams hyper;
    NetPair actor1;
    NetPair actor2;
    NetPair critic1;
    NetPair critic2;

private:
    std::string name_ = "ssd3";
    int state_dim_;
    int action_dim_;
    std::vector<double> inv_scale_;
    long update_count_ = 0;
    int chosen_actor_ = 0;
};

enum class Algo { kDdpg, kTd3, kSsd3 };

Algo algo_from_string(const std::string& name);  // throws on unknown name
std::string algo_name(Algo algo);

std::unique_ptr<Agent> make_agent(Algo algo, int state_dim, int action_dim,
                                  std::vector<double> state_scale, const AgentHyperparams& hyper,
                                  std::uint64_t init_seed);

struct EpisodeStats {
    int episode = 0;
    double cum_reward = 0.0;
    double mean_eh_eff = 0.0;
    double qos_rate = 0.0;
    double critic_loss = 0.0;
    double actor_loss = 0.0;
    std::vector<double> mean_rates;    // per-user, averaged over the episode
    std::vector<double> eh_eff_steps;  // per-step efficiency trace
};

struct TrainResult {
    std::vector<EpisodeStats> episodes;
};

// Runs the episode loop: warmup with uniform random actions, exploration
// noise afterwards, one update per post-warmup step.
TrainResult train(EnvBase& env, Agent& agent, const AgentHyperparams& hyper, int episodes,
                  std::uint64_t seed);

}  // namespace uavris

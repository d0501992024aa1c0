// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <doctest.h>
#include <random>
#include <set>

#include "toy_env.hpp"
#include "uavris/agents.hpp"

using namespace uavris;

namespace {

Transition make_transition(int state_dim, int action_dim, double reward, bool done,
                           std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Transition t;
    t.state.resize(static_cast<size_t>(state_dim));
    t.next_state.resize(static_cast<size_t>(state_dim));
    t.action.resize(static_cast<size_t>(action_dim));
    for (auto& v : t.state) v = u(rng);
    for (auto& v : t.next_state) v = u(rng);
    for (auto& v : t.action) v = u(rng);
    t.reward = reward;
    t.done = done;
    return t;
}

AgentHyperparams small_hyper() {
    AgentHyperparams h;
    h.hidden = {16, 16};
    h.batch_size = 4;
    h.warmup_steps = 0;
    h.policy_delay = 1;
    return h;
}

std::vector<double> ones(int dim, double v) { return std::vector<double>(static_cast<size_t>(dim), v); }

}  // namespace

TEST_CASE("target-value building blocks") {
    CHECK(ddpg_target(1.0, true, 0.99, 123.0) == 1.0);
    CHECK(ddpg_target(1.0, false, 0.99, 2.0) == doctest::Approx(2.98).epsilon(1e-15));
    CHECK(ddpg_target(5.0, false, 0.0, 77.0) == 5.0);

    CHECK(td3_target_value(1.0, false, 0.99, 2.0, 3.0) == doctest::Approx(2.98).epsilon(1e-15));
    CHECK(td3_target_value(1.0, false, 0.99, 2.0, 2.0) ==
          doctest::Approx(ddpg_target(1.0, false, 0.99, 2.0)));
    CHECK(td3_target_value(0.0, false, 1.0 - 1e-9, -4.0, 9.0) <= 9.0 * (1.0 - 1e-9));
    CHECK(td3_target_value(7.0, true, 0.5, 1.0, 2.0) == 7.0);
}

TEST_CASE("softmax-weighted pair") {
    CHECK(softmax_weighted_pair(0.7, 0.7, 10.0) == 0.7);
    CHECK(softmax_weighted_pair(1.0, 3.0, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
    const double e = std::exp(1.0);
    const double expected = (e * 1.0 + e * e * 2.0) / (e + e * e);
    CHECK(softmax_weighted_pair(1.0, 2.0, 1.0) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(softmax_weighted_pair(1.0, 2.0, 1.0) == doctest::Approx(1.7311).epsilon(1e-4));

    // convex bounds and monotonicity toward the larger value
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int t = 0; t < 10000; ++t) {
        const double a = u(rng), b = u(rng);
        const double beta = std::abs(u(rng)) * 4.0;
        const double v = softmax_weighted_pair(a, b, beta);
        CHECK(v >= std::min(a, b) - 1e-12);
        CHECK(v <= std::max(a, b) + 1e-12);
        if (a != b) CHECK(softmax_weighted_pair(a, b, beta + 1.0) >= v - 1e-12);
    }
    // extreme beta saturates at the larger value without overflow
    CHECK(softmax_weighted_pair(-1.0, 2.0, 1e8) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(softmax_weighted_pair(-1.0, 2.0, -1e8) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("actor selection ties go to the first") {
    CHECK(select_actor_index(1.0, 1.0) == 0);
    CHECK(select_actor_index(5.0, 3.0) == 0);
    CHECK(select_actor_index(3.0, 5.0) == 1);
}

TEST_CASE("replay buffer is FIFO-bounded with uniform coverage") {
    std::mt19937_64 rng(5);
    ReplayBuffer buf(8);
    CHECK_THROWS_AS(buf.sample_indices(1, rng), std::logic_error);

    for (int i = 0; i < 11; ++i) {
        Transition t = make_transition(2, 1, static_cast<double>(i), false, rng);
        buf.push(std::move(t));
    }
    CHECK(buf.size() == 8);
    // pushes 0..10 into capacity 8: the oldest three are gone
    CHECK(buf.at(0).reward == 3.0);
    CHECK(buf.at(7).reward == 10.0);
    CHECK_THROWS_AS(buf.at(8), std::out_of_range);

    std::set<double> seen;
    for (int draw = 0; draw < 500; ++draw)
        for (size_t i : buf.sample_indices(4, rng)) seen.insert(buf.at(i).reward);
    CHECK(seen.size() == 8);
}

TEST_CASE("hyperparameter validation") {
    AgentHyperparams h;
    CHECK_NOTHROW(h.validate());
    h.gamma = 1.0;
    CHECK_THROWS_AS(h.validate(), std::invalid_argument);
    h = AgentHyperparams{};
    h.rho = 0.0;
    CHECK_THROWS_AS(h.validate(), std::invalid_argument);
    h = AgentHyperparams{};
    h.batch_size = 0;
    CHECK_THROWS_AS(h.validate(), std::invalid_argument);
}

TEST_CASE("act is deterministic without exploration and clipped with it") {
    const int sd = 3, ad = 2;
    for (const char* name : {"ddpg", "td3", "ssd3"}) {
        AgentHyperparams h = small_hyper();
        auto agent = make_agent(algo_from_string(name), sd, ad, ones(sd, 1.0), h, 42);
        std::mt19937_64 rng(1);
        const std::vector<double> s{0.2, -0.7, 1.4};
        const auto a1 = agent->act(s, false, rng);
        const auto a2 = agent->act(s, false, rng);
        REQUIRE(a1.size() == static_cast<size_t>(ad));
        for (size_t i = 0; i < a1.size(); ++i) CHECK(a1[i] == a2[i]);

        // sigma 0 with exploration still equals the deterministic output
        auto h0 = h;
        h0.sigma_explore = 0.0;
        auto agent0 = make_agent(algo_from_string(name), sd, ad, ones(sd, 1.0), h0, 42);
        const auto b1 = agent0->act(s, false, rng);
        const auto b2 = agent0->act(s, true, rng);
        for (size_t i = 0; i < b1.size(); ++i) CHECK(b1[i] == b2[i]);

        std::mt19937_64 rng2(2);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        int violations = 0;
        for (int t = 0; t < 10000; ++t) {
            const std::vector<double> state{u(rng2), u(rng2), u(rng2)};
            for (double v : agent->act(state, true, rng2))
                if (v < -1.0 || v > 1.0) ++violations;
        }
        CHECK(violations == 0);
    }
}

TEST_CASE("update is a flagged no-op while the buffer is underfull") {
    AgentHyperparams h = small_hyper();
    h.batch_size = 32;
    DdpgAgent agent(2, 1, ones(2, 1.0), h, 7);
    ReplayBuffer buf(64);
    std::mt19937_64 rng(8);
    buf.push(make_transition(2, 1, 0.5, false, rng));
    const UpdateDiagnostics diag = agent.update(buf, rng);
    CHECK_FALSE(diag.updated);
    CHECK_FALSE(diag.actor_updated);
}

TEST_CASE("a perfectly fit target leaves the critic untouched") {
    AgentHyperparams h = small_hyper();
    h.batch_size = 1;
    h.gamma = 0.0;
    DdpgAgent agent(2, 1, ones(2, 1.0), h, 9);
    std::mt19937_64 rng(10);
    Transition t = make_transition(2, 1, 0.0, true, rng);

    std::vector<double> sa = t.state;
    sa.insert(sa.end(), t.action.begin(), t.action.end());
    t.reward = forward(agent.critic.online, agent.critic.spec, sa)[0];  // y == Q(s, a)

    const MlpParams before = agent.critic.online;
    ReplayBuffer buf(4);
    buf.push(t);
    const UpdateDiagnostics diag = agent.update(buf, rng);
    CHECK(diag.updated);
    CHECK(diag.critic_loss == 0.0);
    for (size_t l = 0; l < before.w.size(); ++l)
        for (size_t i = 0; i < before.w[l].a.size(); ++i)
            CHECK(agent.critic.online.w[l].a[i] == before.w[l].a[i]);
}

TEST_CASE("reported critic loss matches an independent recomputation and descends") {
    AgentHyperparams h = small_hyper();
    h.batch_size = 1;
    DdpgAgent agent(2, 1, ones(2, 1.0), h, 11);
    std::mt19937_64 rng(12);
    Transition t = make_transition(2, 1, 0.8, true, rng);  // done: y == r
    ReplayBuffer buf(4);
    buf.push(t);

    std::vector<double> sa = t.state;
    sa.insert(sa.end(), t.action.begin(), t.action.end());
    const double q_before = forward(agent.critic.online, agent.critic.spec, sa)[0];
    const double expected_loss = (0.8 - q_before) * (0.8 - q_before);

    UpdateDiagnostics diag = agent.update(buf, rng);
    CHECK(diag.critic_loss == doctest::Approx(expected_loss).epsilon(1e-12));

    double last = diag.critic_loss;
    for (int i = 0; i < 20; ++i) diag = agent.update(buf, rng);
    CHECK(diag.critic_loss < last);
}

TEST_CASE("ssd3 entropy regularizer hand value") {
    const int sd = 2, ad = 3;
    AgentHyperparams h = small_hyper();
    h.lambda_ent = 1.0;
    h.policy_delay = 1;
    Ssd3Agent agent(sd, ad, ones(sd, 1.0), h, 13);

    // force mu(s) == 0.5 per coordinate and critics == 0
    auto zero_net = [](NetPair& net) {
        for (auto& w : net.online.w)
            for (auto& v : w.a) v = 0.0;
        for (auto& b : net.online.b)
            for (auto& v : b) v = 0.0;
        net.target = net.online;
    };
    zero_net(agent.actor1);
    zero_net(agent.actor2);
    zero_net(agent.critic1);
    zero_net(agent.critic2);
    const double preimage = std::atanh(0.5);
    for (auto& v : agent.actor1.online.b.back()) v = preimage;
    agent.actor1.target = agent.actor1.online;

    std::mt19937_64 rng(14);
    ReplayBuffer buf(16);
    for (int i = 0; i < 8; ++i) buf.push(make_transition(sd, ad, 0.0, true, rng));
    agent.act(buf.at(0).state, false, rng);  // tie selects the first actor

    const UpdateDiagnostics diag = agent.update(buf, rng);
    CHECK(diag.actor_updated);
    CHECK(diag.actor_loss == doctest::Approx(0.25 * ad).epsilon(1e-9));
}

TEST_CASE("ssd3 degenerates to td3 under twin initialization") {
    const int sd = 3, ad = 2;
    AgentHyperparams h = small_hyper();
    h.sigma_target = 0.0;
    h.beta_softmax = 1e6;
    h.policy_delay = 1;

    Ssd3Agent ssd3(sd, ad, ones(sd, 1.0), h, 15);
    ssd3.actor2.online = ssd3.actor1.online;
    ssd3.actor2.target = ssd3.actor1.target;

    Td3Agent td3(sd, ad, ones(sd, 1.0), h, 16);
    td3.actor.online = ssd3.actor1.online;
    td3.actor.target = ssd3.actor1.target;
    td3.critic1.online = ssd3.critic1.online;
    td3.critic1.target = ssd3.critic1.target;
    td3.critic2.online = ssd3.critic2.online;
    td3.critic2.target = ssd3.critic2.target;

    std::mt19937_64 rng(17);
    std::vector<Transition> storage;
    std::vector<const Transition*> batch;
    for (int i = 0; i < 16; ++i) storage.push_back(make_transition(sd, ad, i * 0.1, i % 5 == 0, rng));
    for (const auto& t : storage) batch.push_back(&t);

    std::mt19937_64 ra(1), rb(1);
    const auto ys = ssd3.targets_for(batch, ra);
    const auto yt = td3.targets_for(batch, rb);
    REQUIRE(ys.size() == yt.size());
    for (size_t i = 0; i < ys.size(); ++i) CHECK(ys[i] == doctest::Approx(yt[i]).epsilon(1e-6));
}

TEST_CASE("training is deterministic and episode count is honored") {
    testing::ToyQuadraticEnv env(5);
    AgentHyperparams h = small_hyper();
    h.batch_size = 8;
    h.warmup_steps = 10;

    auto run = [&] {
        testing::ToyQuadraticEnv e(5);
        Ssd3Agent agent(1, 1, ones(1, 1.0), h, 18);
        return train(e, agent, h, 6, 99);
    };
    const TrainResult a = run();
    const TrainResult b = run();
    REQUIRE(a.episodes.size() == 6);
    for (size_t i = 0; i < a.episodes.size(); ++i) {
        CHECK(a.episodes[i].cum_reward == b.episodes[i].cum_reward);
        CHECK(a.episodes[i].critic_loss == b.episodes[i].critic_loss);
    }

    Ssd3Agent agent(1, 1, ones(1, 1.0), h, 19);
    const TrainResult empty = train(env, agent, h, 0, 1);
    CHECK(empty.episodes.empty());
}

TEST_CASE("ddpg solves the quadratic bandit") {
    AgentHyperparams h;
    h.hidden = {32, 32};
    h.batch_size = 32;
    h.warmup_steps = 100;
    h.sigma_explore = 0.15;
    h.actor_lr = 5e-4;
    testing::ToyQuadraticEnv env(10);
    DdpgAgent agent(1, 1, ones(1, 1.0), h, 21);
    train(env, agent, h, 120, 3);

    std::mt19937_64 rng(4);
    const double a = agent.act({1.0}, false, rng)[0];
    const double greedy_reward = 1.0 - (a - 0.3) * (a - 0.3);
    CHECK(greedy_reward >= 0.9);
}

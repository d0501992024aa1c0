// SPDX-License-Identifier: Apache-2.0
#include "uavris/agents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "uavris/seeding.hpp"

namespace uavris {

namespace {

std::vector<double> apply_inv_scale(const std::vector<double>& s, const std::vector<double>& inv) {
    std::vector<double> out(s.size());
    for (size_t i = 0; i < s.size(); ++i) out[i] = s[i] * inv[i];
    return out;
}

Matrix state_matrix(const std::vector<const Transition*>& batch, const std::vector<double>& inv,
                    bool next) {
    const int dim = static_cast<int>(inv.size());
    Matrix m(static_cast<int>(batch.size()), dim);
    for (size_t r = 0; r < batch.size(); ++r) {
        const auto& src = next ? batch[r]->next_state : batch[r]->state;
        double* row = m.row(static_cast<int>(r));
        for (int c = 0; c < dim; ++c) row[c] = src[static_cast<size_t>(c)] * inv[static_cast<size_t>(c)];
    }
    return m;
}

Matrix action_matrix(const std::vector<const Transition*>& batch, int action_dim) {
    Matrix m(static_cast<int>(batch.size()), action_dim);
    for (size_t r = 0; r < batch.size(); ++r) {
        double* row = m.row(static_cast<int>(r));
        for (int c = 0; c < action_dim; ++c) row[c] = batch[r]->action[static_cast<size_t>(c)];
    }
    return m;
}

Matrix concat_cols(const Matrix& a, const Matrix& b) {
    Matrix m(a.rows, a.cols + b.cols);
    for (int r = 0; r < a.rows; ++r) {
        double* row = m.row(r);
        const double* ar = a.row(r);
        const double* br = b.row(r);
        std::copy(ar, ar + a.cols, row);
        std::copy(br, br + b.cols, row + a.cols);
    }
    return m;
}

void add_clipped_noise(Matrix& actions, double sigma, double clip, std::mt19937_64& rng) {
    if (sigma <= 0.0) return;
    std::normal_distribution<double> gauss(0.0, sigma);
    for (auto& v : actions.a) {
        const double noise = std::clamp(gauss(rng), -clip, clip);
        v = std::clamp(v + noise, -1.0, 1.0);
    }
}

MlpSpec actor_spec(int state_dim, int action_dim, const std::vector<int>& hidden) {
    return MlpSpec{state_dim, hidden, action_dim, OutputActivation::kTanh};
}

MlpSpec critic_spec(int state_dim, int action_dim, const std::vector<int>& hidden) {
    return MlpSpec{state_dim + action_dim, hidden, 1, OutputActivation::kIdentity};
}

std::vector<const Transition*> gather(const ReplayBuffer& buffer, const std::vector<size_t>& idx) {
    std::vector<const Transition*> batch;
    batch.reserve(idx.size());
    for (size_t i : idx) batch.push_back(&buffer.at(i));
    return batch;
}

// One optimizer step on the mean-squared error toward `targets`; returns the
// pre-step loss.
double critic_regression_step(NetPair& critic, const Matrix& sa, const std::vector<double>& targets) {
    BatchCache cache;
    const Matrix& q = forward_batch(critic.online, critic.spec, sa, cache);
    const int b = sa.rows;
    double loss = 0.0;
    Matrix upstream(b, 1);
    for (int i = 0; i < b; ++i) {
        const double err = q(i, 0) - targets[static_cast<size_t>(i)];
        loss += err * err;
        upstream(i, 0) = 2.0 * err / b;
    }
    loss /= b;
    MlpGrads grads = zero_grads(critic.spec);
    backward_batch(critic.online, critic.spec, cache, upstream, grads);
    adam_step(critic.opt, critic.online, grads);
    return loss;
}

}  // namespace

ReplayBuffer::ReplayBuffer(size_t capacity) : capacity_(capacity) {
    if (capacity_ < 1) throw std::invalid_argument("ReplayBuffer: capacity must be >= 1");
    data_.reserve(std::min<size_t>(capacity_, 1 << 16));
}

void ReplayBuffer::push(Transition t) {
    if (data_.size() < capacity_) {
        data_.push_back(std::move(t));
    } else {
        data_[next_] = std::move(t);
        next_ = (next_ + 1) % capacity_;
    }
}

const Transition& ReplayBuffer::at(size_t i) const {
    if (i >= data_.size()) throw std::out_of_range("ReplayBuffer::at");
    if (data_.size() < capacity_) return data_[i];
    return data_[(next_ + i) % capacity_];
}

std::vector<size_t> ReplayBuffer::sample_indices(size_t batch, std::mt19937_64& rng) const {
    if (batch > data_.size()) throw std::logic_error("ReplayBuffer: not enough transitions to sample");
    std::uniform_int_distribution<size_t> pick(0, data_.size() - 1);
    std::vector<size_t> idx(batch);
    for (auto& i : idx) i = pick(rng);
    return idx;
}

void AgentHyperparams::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("AgentHyperparams: ") + what);
    };
    require(gamma >= 0.0 && gamma < 1.0, "gamma must be in [0, 1)");
    require(rho > 0.0 && rho <= 1.0, "rho must be in (0, 1]");
    require(sigma_explore >= 0.0, "sigma_explore must be >= 0");
    require(sigma_target >= 0.0, "sigma_target must be >= 0");
    require(noise_clip > 0.0, "noise_clip must be > 0");
    require(std::isfinite(beta_softmax), "beta_softmax must be finite");
    require(lambda_ent >= 0.0, "lambda_ent must be >= 0");
    require(batch_size >= 1, "batch_size must be >= 1");
    require(policy_delay >= 1, "policy_delay must be >= 1");
    require(replay_capacity >= 1, "replay_capacity must be >= 1");
    require(warmup_steps >= 0, "warmup_steps must be >= 0");
    require(actor_lr > 0.0 && critic_lr > 0.0, "learning rates must be > 0");
    for (int h : hidden) require(h >= 1, "hidden widths must be >= 1");
}

double ddpg_target(double r, bool done, double gamma, double next_q) {
    return done ? r : r + gamma * next_q;
}

double td3_target_value(double r, bool done, double gamma, double q1, double q2) {
    return done ? r : r + gamma * std::min(q1, q2);
}

double softmax_weighted_pair(double q_min1, double q_min2, double beta) {
    const double hi = std::max(beta * q_min1, beta * q_min2);
    const double w1 = std::exp(beta * q_min1 - hi);
    const double w2 = std::exp(beta * q_min2 - hi);
    return (w1 * q_min1 + w2 * q_min2) / (w1 + w2);
}

int select_actor_index(double value1, double value2) { return value1 >= value2 ? 0 : 1; }

NetPair make_net(const MlpSpec& spec, std::mt19937_64& rng, double lr, double final_scale) {
    NetPair net;
    net.spec = spec;
    net.online = init_params(spec, rng, final_scale);
    net.target = net.online;
    net.opt = make_adam(spec, lr);
    return net;
}

// ---------------------------------------------------------------------------
// DDPG

DdpgAgent::DdpgAgent(int state_dim, int action_dim, std::vector<double> state_scale,
                     AgentHyperparams hyper_in, std::uint64_t init_seed)
    : hyper(std::move(hyper_in)), state_dim_(state_dim), action_dim_(action_dim) {
    hyper.validate();
    inv_scale_.resize(state_scale.size());
    for (size_t i = 0; i < state_scale.size(); ++i) inv_scale_[i] = 1.0 / state_scale[i];
    std::mt19937_64 rng(mix_seed(init_seed, 0));
    actor = make_net(actor_spec(state_dim, action_dim, hyper.hidden), rng, hyper.actor_lr, 1e-3);
    critic = make_net(critic_spec(state_dim, action_dim, hyper.hidden), rng, hyper.critic_lr, 1.0);
}

std::vector<double> DdpgAgent::act(const std::vector<double>& state, bool explore,
                                   std::mt19937_64& rng) {
    std::vector<double> a = forward(actor.online, actor.spec, apply_inv_scale(state, inv_scale_));
    if (explore && hyper.sigma_explore > 0.0) {
        std::normal_distribution<double> gauss(0.0, hyper.sigma_explore);
        for (auto& v : a) v = std::clamp(v + gauss(rng), -1.0, 1.0);
    }
    return a;
}

UpdateDiagnostics DdpgAgent::update(const ReplayBuffer& buffer, std::mt19937_64& rng) {
    UpdateDiagnostics diag;
    if (buffer.size() < static_cast<size_t>(hyper.batch_size)) return diag;
    const auto batch = gather(buffer, buffer.sample_indices(static_cast<size_t>(hyper.batch_size), rng));
    const int b = static_cast<int>(batch.size());

    const Matrix s = state_matrix(batch, inv_scale_, false);
    const Matrix s1 = state_matrix(batch, inv_scale_, true);
    const Matrix a = action_matrix(batch, action_dim_);

    BatchCache c_actor_t, c_critic_t;
    const Matrix& a1 = forward_batch(actor.target, actor.spec, s1, c_actor_t);
    const Matrix& q1 = forward_batch(critic.target, critic.spec, concat_cols(s1, a1), c_critic_t);

    std::vector<double> y(static_cast<size_t>(b));
    for (int i = 0; i < b; ++i)
        y[static_cast<size_t>(i)] =
            ddpg_target(batch[static_cast<size_t>(i)]->reward, batch[static_cast<size_t>(i)]->done,
                        hyper.gamma, q1(i, 0));

    diag.critic_loss = critic_regression_step(critic, concat_cols(s, a), y);

    // ascend Q(s, mu(s))
    BatchCache c_actor, c_critic;
    const Matrix& a_mu = forward_batch(actor.online, actor.spec, s, c_actor);
    const Matrix& q_mu = forward_batch(critic.online, critic.spec, concat_cols(s, a_mu), c_critic);
    Matrix up(b, 1);
    double mean_q = 0.0;
    for (int i = 0; i < b; ++i) {
        up(i, 0) = -1.0 / b;
        mean_q += q_mu(i, 0);
    }
    mean_q /= b;

    MlpGrads scratch = zero_grads(critic.spec);
    Matrix input_grad;
    backward_batch(critic.online, critic.spec, c_critic, up, scratch, &input_grad);

    Matrix actor_up(b, action_dim_);
    for (int r = 0; r < b; ++r)
        for (int c = 0; c < action_dim_; ++c) actor_up(r, c) = input_grad(r, state_dim_ + c);

    MlpGrads agrads = zero_grads(actor.spec);
    backward_batch(actor.online, actor.spec, c_actor, actor_up, agrads);
    adam_step(actor.opt, actor.online, agrads);

    soft_update(actor.target, actor.online, hyper.rho);
    soft_update(critic.target, critic.online, hyper.rho);

    diag.updated = true;
    diag.actor_updated = true;
    diag.actor_loss = -mean_q;
    return diag;
}

void DdpgAgent::save(const std::string& prefix) const {
    save_mlp(prefix + "_actor.mlp", actor.spec, actor.online);
    save_mlp(prefix + "_critic.mlp", critic.spec, critic.online);
}

// ---------------------------------------------------------------------------
// TD3

Td3Agent::Td3Agent(int state_dim, int action_dim, std::vector<double> state_scale,
                   AgentHyperparams hyper_in, std::uint64_t init_seed)
    : hyper(std::move(hyper_in)), state_dim_(state_dim), action_dim_(action_dim) {
    hyper.validate();
    inv_scale_.resize(state_scale.size());
    for (size_t i = 0; i < state_scale.size(); ++i) inv_scale_[i] = 1.0 / state_scale[i];
    std::mt19937_64 rng(mix_seed(init_seed, 1));
    actor = make_net(actor_spec(state_dim, action_dim, hyper.hidden), rng, hyper.actor_lr, 1e-3);
    critic1 = make_net(critic_spec(state_dim, action_dim, hyper.hidden), rng, hyper.critic_lr, 1.0);
    critic2 = make_net(critic_spec(state_dim, action_dim, hyper.hidden), rng, hyper.critic_lr, 1.0);
}

std::vector<double> Td3Agent::act(const std::vector<double>& state, bool explore,
                                  std::mt19937_64& rng) {
    std::vector<double> a = forward(actor.online, actor.spec, apply_inv_scale(state, inv_scale_));
    if (explore && hyper.sigma_explore > 0.0) {
        std::normal_distribution<double> gauss(0.0, hyper.sigma_explore);
        for (auto& v : a) v = std::clamp(v + gauss(rng), -1.0, 1.0);
    }
    return a;
}

std::vector<double> Td3Agent::targets_for(const std::vector<const Transition*>& batch,
                                          std::mt19937_64& rng) const {
    const Matrix s1 = state_matrix(batch, inv_scale_, true);
    BatchCache c_actor;
    Matrix a1 = forward_batch(actor.target, actor.spec, s1, c_actor);
    add_clipped_noise(a1, hyper.sigma_target, hyper.noise_clip, rng);

    const Matrix sa1 = concat_cols(s1, a1);
    BatchCache c1, c2;
    const Matrix& q1 = forward_batch(critic1.target, critic1.spec, sa1, c1);
    const Matrix& q2 = forward_batch(critic2.target, critic2.spec, sa1, c2);

    std::vector<double> y(batch.size());
    for (size_t i = 0; i < batch.size(); ++i)
        y[i] = td3_target_value(batch[i]->reward, batch[i]->done, hyper.gamma,
                                q1(static_cast<int>(i), 0), q2(static_cast<int>(i), 0));
    return y;
}

UpdateDiagnostics Td3Agent::update(const ReplayBuffer& buffer, std::mt19937_64& rng) {
    UpdateDiagnostics diag;
    if (buffer.size() < static_cast<size_t>(hyper.batch_size)) return diag;
    const auto batch = gather(buffer, buffer.sample_indices(static_cast<size_t>(hyper.batch_size), rng));
    const int b = static_cast<int>(batch.size());

    const std::vector<double> y = targets_for(batch, rng);

    const Matrix s = state_matrix(batch, inv_scale_, false);
    const Matrix a = action_matrix(batch, action_dim_);
    const Matrix sa = concat_cols(s, a);
    const double loss1 = critic_regression_step(critic1, sa, y);
    const double loss2 = critic_regression_step(critic2, sa, y);
    diag.critic_loss = 0.5 * (loss1 + loss2);
    diag.updated = true;

    ++update_count_;
    if (update_count_ % hyper.policy_delay == 0) {
        BatchCache c_actor, c_critic;
        const Matrix& a_mu = forward_batch(actor.online, actor.spec, s, c_actor);
        const Matrix& q_mu = forward_batch(critic1.online, critic1.spec, concat_cols(s, a_mu), c_critic);
        Matrix up(b, 1);
        double mean_q = 0.0;
        for (int i = 0; i < b; ++i) {
            up(i, 0) = -1.0 / b;
            mean_q += q_mu(i, 0);
        }
        mean_q /= b;

        MlpGrads scratch = zero_grads(critic1.spec);
        Matrix input_grad;
        backward_batch(critic1.online, critic1.spec, c_critic, up, scratch, &input_grad);

        Matrix actor_up(b, action_dim_);
        for (int r = 0; r < b; ++r)
            for (int c = 0; c < action_dim_; ++c) actor_up(r, c) = input_grad(r, state_dim_ + c);

        MlpGrads agrads = zero_grads(actor.spec);
        backward_batch(actor.online, actor.spec, c_actor, actor_up, agrads);
        adam_step(actor.opt, actor.online, agrads);

        soft_update(actor.target, actor.online, hyper.rho);
        soft_update(critic1.target, critic1.online, hyper.rho);
        soft_update(critic2.target, critic2.online, hyper.rho);

        diag.actor_updated = true;
        diag.actor_loss = -mean_q;
    }
    return diag;
}

void Td3Agent::save(const std::string& prefix) const {
    save_mlp(prefix + "_actor.mlp", actor.spec, actor.online);
    save_mlp(prefix + "_critic1.mlp", critic1.spec, critic1.online);
    save_mlp(prefix + "_critic2.mlp", critic2.spec, critic2.online);
}

// ---------------------------------------------------------------------------
// SSD3

Ssd3Agent::Ssd3Agent(int state_dim, int action_dim, std::vector<double> state_scale,
                     AgentHyperparams hyper_in, std::uint64_t init_seed)
    : hyper(std::move(hyper_in)), state_dim_(state_dim), action_dim_(action_dim) {
    hyper.validate();
    inv_scale_.resize(state_scale.size());
    for (size_t i = 0; i < state_scale.size(); ++i) inv_scale_[i] = 1.0 / state_scale[i];
    std::mt19937_64 rng(mix_seed(init_seed, 2));
    actor1 = make_net(actor_spec(state_dim, action_dim, hyper.hidden), rng, hyper.actor_lr, 1e-3);
    actor2 = make_net(actor_spec(state_dim, action_dim, hyper.hidden), rng, hyper.actor_lr, 1e-3);
    critic1 = make_net(critic_spec(state_dim, action_dim, hyper.hidden), rng, hyper.critic_lr, 1.0);
    critic2 = make_net(critic_spec(state_dim, action_dim, hyper.hidden), rng, hyper.critic_lr, 1.0);
}

int Ssd3Agent::select_actor(const std::vector<double>& state) const {
    const std::vector<double> s = apply_inv_scale(state, inv_scale_);
    auto value_of = [&](const NetPair& actor, const NetPair& critic) {
        std::vector<double> a = forward(actor.online, actor.spec, s);
        std::vector<double> sa = s;
        sa.insert(sa.end(), a.begin(), a.end());
        return forward(critic.online, critic.spec, sa)[0];
    };
    return select_actor_index(value_of(actor1, critic1), value_of(actor2, critic2));
}

std::vector<double> Ssd3Agent::act(const std::vector<double>& state, bool explore,
                                   std::mt19937_64& rng) {
    chosen_actor_ = select_actor(state);
    const NetPair& actor = chosen_actor_ == 0 ? actor1 : actor2;
    std::vector<double> a = forward(actor.online, actor.spec, apply_inv_scale(state, inv_scale_));
    if (explore && hyper.sigma_explore > 0.0) {
        std::normal_distribution<double> gauss(0.0, hyper.sigma_explore);
        for (auto& v : a) v = std::clamp(v + gauss(rng), -1.0, 1.0);
    }
    return a;
}

std::vector<double> Ssd3Agent::targets_for(const std::vector<const Transition*>& batch,
                                           std::mt19937_64& rng) const {
    const Matrix s1 = state_matrix(batch, inv_scale_, true);

    auto candidate = [&](const NetPair& actor) {
        BatchCache cache;
        Matrix a = forward_batch(actor.target, actor.spec, s1, cache);
        add_clipped_noise(a, hyper.sigma_target, hyper.noise_clip, rng);
        return a;
    };
    const Matrix a1 = candidate(actor1);
    const Matrix a2 = candidate(actor2);

    auto min_q = [&](const Matrix& a) {
        const Matrix sa = concat_cols(s1, a);
        BatchCache c1, c2;
        const Matrix& q1 = forward_batch(critic1.target, critic1.spec, sa, c1);
        const Matrix& q2 = forward_batch(critic2.target, critic2.spec, sa, c2);
        std::vector<double> q(static_cast<size_t>(sa.rows));
        for (int i = 0; i < sa.rows; ++i) q[static_cast<size_t>(i)] = std::min(q1(i, 0), q2(i, 0));
        return q;
    };
    const std::vector<double> q_min1 = min_q(a1);
    const std::vector<double> q_min2 = min_q(a2);

    std::vector<double> y(batch.size());
    for (size_t i = 0; i < batch.size(); ++i) {
        const double t = softmax_weighted_pair(q_min1[i], q_min2[i], hyper.beta_softmax);
        y[i] = batch[i]->done ? batch[i]->reward : batch[i]->reward + hyper.gamma * t;
    }
    return y;
}

UpdateDiagnostics Ssd3Agent::update(const ReplayBuffer& buffer, std::mt19937_64& rng) {
    UpdateDiagnostics diag;
    if (buffer.size() < static_cast<size_t>(hyper.batch_size)) return diag;
    const auto batch = gather(buffer, buffer.sample_indices(static_cast<size_t>(hyper.batch_size), rng));
    const int b = static_cast<int>(batch.size());

    const std::vector<double> y = targets_for(batch, rng);

    const Matrix s = state_matrix(batch, inv_scale_, false);
    const Matrix a = action_matrix(batch, action_dim_);
    const Matrix sa = concat_cols(s, a);
    const double loss1 = critic_regression_step(critic1, sa, y);
    const double loss2 = critic_regression_step(critic2, sa, y);
    diag.critic_loss = 0.5 * (loss1 + loss2);
    diag.updated = true;

    ++update_count_;
    if (update_count_ % hyper.policy_delay == 0) {
        NetPair& actor = chosen_actor_ == 0 ? actor1 : actor2;

        BatchCache c_actor;
        const Matrix& a_mu = forward_batch(actor.online, actor.spec, s, c_actor);
        const Matrix sa_mu = concat_cols(s, a_mu);
        BatchCache cq1, cq2;
        const Matrix& q1 = forward_batch(critic1.online, critic1.spec, sa_mu, cq1);
        const Matrix& q2 = forward_batch(critic2.online, critic2.spec, sa_mu, cq2);

        // route each sample's gradient through the larger critic (ties: first)
        Matrix up1(b, 1), up2(b, 1);
        double mean_qmax = 0.0;
        for (int i = 0; i < b; ++i) {
            const bool first = q1(i, 0) >= q2(i, 0);
            up1(i, 0) = first ? -1.0 / b : 0.0;
            up2(i, 0) = first ? 0.0 : -1.0 / b;
            mean_qmax += std::max(q1(i, 0), q2(i, 0));
        }
        mean_qmax /= b;

        MlpGrads scratch1 = zero_grads(critic1.spec);
        MlpGrads scratch2 = zero_grads(critic2.spec);
        Matrix ig1, ig2;
        backward_batch(critic1.online, critic1.spec, cq1, up1, scratch1, &ig1);
        backward_batch(critic2.online, critic2.spec, cq2, up2, scratch2, &ig2);

        double reg = 0.0;
        Matrix actor_up(b, action_dim_);
        for (int r = 0; r < b; ++r)
            for (int c = 0; c < action_dim_; ++c) {
                const double mu = a_mu(r, c);
                reg += mu * mu;
                actor_up(r, c) = ig1(r, state_dim_ + c) + ig2(r, state_dim_ + c) +
                                 2.0 * hyper.lambda_ent * mu / b;
            }
        reg /= b;

        MlpGrads agrads = zero_grads(actor.spec);
        backward_batch(actor.online, actor.spec, c_actor, actor_up, agrads);
        adam_step(actor.opt, actor.online, agrads);

        soft_update(actor1.target, actor1.online, hyper.rho);
        soft_update(actor2.target, actor2.online, hyper.rho);
        soft_update(critic1.target, critic1.online, hyper.rho);
        soft_update(critic2.target, critic2.online, hyper.rho);

        diag.actor_updated = true;
        diag.actor_loss = -mean_qmax + hyper.lambda_ent * reg;
    }
    return diag;
}

void Ssd3Agent::save(const std::string& prefix) const {
    save_mlp(prefix + "_actor1.mlp", actor1.spec, actor1.online);
    save_mlp(prefix + "_actor2.mlp", actor2.spec, actor2.online);
    save_mlp(prefix + "_critic1.mlp", critic1.spec, critic1.online);
    save_mlp(prefix + "_critic2.mlp", critic2.spec, critic2.online);
}

// ---------------------------------------------------------------------------

Algo algo_from_string(const std::string& name) {
    if (name == "ddpg") return Algo::kDdpg;
    if (name == "td3") return Algo::kTd3;
    if (name == "ssd3") return Algo::kSsd3;
    throw std::invalid_argument("unknown algorithm: " + name);
}

std::string algo_name(Algo algo) {
    switch (algo) {
        case Algo::kDdpg: return "ddpg";
        case Algo::kTd3: return "td3";
        case Algo::kSsd3: return "ssd3";
    }
    return "?";
}

std::unique_ptr<Agent> make_agent(Algo algo, int state_dim, int action_dim,
                                  std::vector<double> state_scale, const AgentHyperparams& hyper,
                                  std::uint64_t init_seed) {
    switch (algo) {
        case Algo::kDdpg:
            return std::make_unique<DdpgAgent>(state_dim, action_dim, std::move(state_scale), hyper,
                                               init_seed);
        case Algo::kTd3:
            return std::make_unique<Td3Agent>(state_dim, action_dim, std::move(state_scale), hyper,
                                              init_seed);
        case Algo::kSsd3:
            return std::make_unique<Ssd3Agent>(state_dim, action_dim, std::move(state_scale), hyper,
                                               init_seed);
    }
    throw std::invalid_argument("make_agent: bad algo");
}

TrainResult train(EnvBase& env, Agent& agent, const AgentHyperparams& hyper, int episodes,
                  std::uint64_t seed) {
    hyper.validate();
    if (episodes < 0) throw std::invalid_argument("train: episodes must be >= 0");

    TrainResult result;
    ReplayBuffer buffer(hyper.replay_capacity);
    std::mt19937_64 rng(mix_seed(seed, 0xA6E17));
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);

    long total_steps = 0;
    for (int ep = 0; ep < episodes; ++ep) {
        std::vector<double> state = env.reset(mix_seed(seed, 1000003ULL + static_cast<std::uint64_t>(ep)));
        EpisodeStats stats;
        stats.episode = ep;
        int steps = 0;
        int qos_hits = 0;
        int updates = 0;
        int actor_updates = 0;
        bool done = false;
        while (!done) {
            std::vector<double> raw;
            if (total_steps < hyper.warmup_steps) {
                raw.resize(static_cast<size_t>(env.action_dim()));
                for (auto& v : raw) v = uniform(rng);
            } else {
                raw = agent.act(state, true, rng);
            }

            StepResult out = env.step_raw(raw);
            buffer.push({state, raw, out.reward, out.next_state, out.done});
            ++total_steps;

            if (total_steps >= hyper.warmup_steps) {
                const UpdateDiagnostics diag = agent.update(buffer, rng);
                if (diag.updated) {
                    ++updates;
                    stats.critic_loss += diag.critic_loss;
                }
                if (diag.actor_updated) {
                    ++actor_updates;
                    stats.actor_loss += diag.actor_loss;
                }
            }

            stats.cum_reward += out.reward;
            stats.mean_eh_eff += out.info.eh_eff;
            stats.eh_eff_steps.push_back(out.info.eh_eff);
            if (stats.mean_rates.size() < out.info.rates.size())
                stats.mean_rates.resize(out.info.rates.size(), 0.0);
            for (size_t k = 0; k < out.info.rates.size(); ++k)
                stats.mean_rates[k] += out.info.rates[k];
            if (out.info.qos) ++qos_hits;
            ++steps;
            state = std::move(out.next_state);
            done = out.done;
        }
        if (steps > 0) {
            stats.mean_eh_eff /= steps;
            stats.qos_rate = static_cast<double>(qos_hits) / steps;
            for (auto& r : stats.mean_rates) r /= steps;
        }
        if (updates > 0) stats.critic_loss /= updates;
        if (actor_updates > 0) stats.actor_loss /= actor_updates;
        result.episodes.push_back(stats);
    }
    return result;
}

}  // namespace uavris

// SPDX-License-Identifier: Apache-2.0
#include "uavris/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uavris {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

StateLayout state_layout(const SystemConfig& cfg) {
    const int n = cfg.ris_count();
    const int m = cfg.bs_count();
    const int k = cfg.num_users();
    StateLayout lay;
    lay.g_offset = 0;
    lay.users_offset = lay.g_offset + 2 * n * m;
    lay.ris_pos_offset = lay.users_offset + 2 * n * k;
    lay.user_pos_offset = lay.ris_pos_offset + 3 * n;
    lay.prev_action_offset = lay.user_pos_offset + 3 * k;
    lay.dim = lay.prev_action_offset + 1 + k + n;
    return lay;
}

std::pair<double, StepInfo> evaluate_action(const SystemConfig& cfg,
                                            const ChannelRealization& real, const Action& a) {
    if (!(a.tau >= 0.0 && a.tau <= 1.0)) throw std::invalid_argument("evaluate_action: tau out of [0, 1]");
    if (static_cast<int>(a.powers.size()) != cfg.num_users())
        throw std::invalid_argument("evaluate_action: powers size mismatch");
    if (static_cast<int>(a.phases.size()) != cfg.ris_count())
        throw std::invalid_argument("evaluate_action: phases size mismatch");
    for (double p : a.powers)
        if (p < 0.0 || p > cfg.p_u_max * (1.0 + 1e-9))
            throw std::invalid_argument("evaluate_action: per-user power out of [0, P_U_max]");

    StepInfo info;
    info.applied = a;
    info.applied.powers = project_powers(a.powers, cfg.p_bs_max);

    const PhaseShifts phases(a.phases);
    const Precoder prec = mrt_precoder(real, phases, info.applied.powers, cfg.p_bs_max);

    info.eps_r = received_rf_power(real, prec);
    info.p_rf = rf_input_power(a.tau, info.eps_r);
    info.eh_eff = eh_efficiency(a.tau, info.eps_r, eh_params(cfg));

    info.rates.resize(static_cast<size_t>(cfg.num_users()));
    info.qos = true;
    for (int k = 0; k < cfg.num_users(); ++k) {
        const double gamma = user_snr(real, phases, prec, k, cfg.noise_power);
        const double rate = user_rate(a.tau, cfg.bandwidth, gamma);
        info.rates[static_cast<size_t>(k)] = rate;
        if (rate < cfg.r_min) info.qos = false;
    }

    const double reward = info.qos ? info.eh_eff : 0.0;
    return {reward, info};
}

RisEnv::RisEnv(SystemConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    layout_ = state_layout(cfg_);
    ris_positions_ = ris_element_positions(cfg_.q_ris, cfg_.ris_array);
}

std::vector<double> RisEnv::encode_state(const Action& prev) const {
    std::vector<double> s(static_cast<size_t>(layout_.dim), 0.0);
    const CMat& g = realization_.g_bs_ris;
    const int nm = g.rows * g.cols;
    for (int i = 0; i < nm; ++i) {
        s[static_cast<size_t>(layout_.g_offset + i)] = g.a[static_cast<size_t>(i)].real();
        s[static_cast<size_t>(layout_.g_offset + nm + i)] = g.a[static_cast<size_t>(i)].imag();
    }
    const int n = cfg_.ris_count();
    for (int k = 0; k < cfg_.num_users(); ++k) {
        const CVec& gu = realization_.g_users[static_cast<size_t>(k)];
        const int base = layout_.users_offset + 2 * n * k;
        for (int i = 0; i < n; ++i) {
            s[static_cast<size_t>(base + i)] = gu[static_cast<size_t>(i)].real();
            s[static_cast<size_t>(base + n + i)] = gu[static_cast<size_t>(i)].imag();
        }
    }
    for (int i = 0; i < n; ++i) {
        const int base = layout_.ris_pos_offset + 3 * i;
        s[static_cast<size_t>(base)] = ris_positions_[static_cast<size_t>(i)].x;
        s[static_cast<size_t>(base) + 1] = ris_positions_[static_cast<size_t>(i)].y;
        s[static_cast<size_t>(base) + 2] = ris_positions_[static_cast<size_t>(i)].z;
    }
    for (int k = 0; k < cfg_.num_users(); ++k) {
        const int base = layout_.user_pos_offset + 3 * k;
        s[static_cast<size_t>(base)] = cfg_.users[static_cast<size_t>(k)].x;
        s[static_cast<size_t>(base) + 1] = cfg_.users[static_cast<size_t>(k)].y;
        s[static_cast<size_t>(base) + 2] = cfg_.users[static_cast<size_t>(k)].z;
    }
    int idx = layout_.prev_action_offset;
    s[static_cast<size_t>(idx++)] = prev.tau;
    for (double p : prev.powers) s[static_cast<size_t>(idx++)] = p;
    for (double t : prev.phases) s[static_cast<size_t>(idx++)] = t;
    return s;
}

std::vector<double> RisEnv::reset(std::uint64_t seed) {
    rng_.seed(seed);
    slot_ = 0;
    active_ = true;
    realization_ = realize_slot(cfg_, rng_);
    prev_action_ = Action{0.0, std::vector<double>(static_cast<size_t>(cfg_.num_users()), 0.0),
                          std::vector<double>(static_cast<size_t>(cfg_.ris_count()), 0.0)};
    return encode_state(prev_action_);
}

Action RisEnv::scale_action(const std::vector<double>& raw) const {
    if (static_cast<int>(raw.size()) != action_dim())
        throw std::invalid_argument("scale_action: raw action size mismatch");
    auto clip = [](double v) { return std::clamp(v, -1.0, 1.0); };
    Action a;
    a.tau = (clip(raw[0]) + 1.0) / 2.0;
    a.powers.resize(static_cast<size_t>(cfg_.num_users()));
    for (int k = 0; k < cfg_.num_users(); ++k)
        a.powers[static_cast<size_t>(k)] = (clip(raw[static_cast<size_t>(1 + k)]) + 1.0) / 2.0 * cfg_.p_u_max;
    a.phases.resize(static_cast<size_t>(cfg_.ris_count()));
    for (int n = 0; n < cfg_.ris_count(); ++n)
        a.phases[static_cast<size_t>(n)] = (clip(raw[static_cast<size_t>(1 + cfg_.num_users() + n)]) + 1.0) * kPi;
    a.powers = project_powers(std::move(a.powers), cfg_.p_bs_max);
    return a;
}

StepResult RisEnv::step(const Action& a) {
    if (!active_) throw std::logic_error("step: environment is terminated; call reset first");

    StepResult out;
    auto [reward, info] = evaluate_action(cfg_, realization_, a);
    out.reward = reward;
    out.info = std::move(info);

    ++slot_;
    out.done = slot_ >= cfg_.slots_per_episode;
    if (out.done) active_ = false;

    realization_ = realize_slot(cfg_, rng_);
    prev_action_ = out.info.applied;
    out.next_state = encode_state(prev_action_);
    return out;
}

StepResult RisEnv::step_raw(const std::vector<double>& raw) { return step(scale_action(raw)); }

std::vector<double> RisEnv::state_scale() const {
    std::vector<double> s(static_cast<size_t>(layout_.dim), 1.0);
    const double d_g = (cfg_.q_ris - cfg_.q_bs).norm();
    const double amp_g = std::sqrt(cfg_.beta0) / d_g;
    const int nm = cfg_.ris_count() * cfg_.bs_count();
    for (int i = 0; i < 2 * nm; ++i) s[static_cast<size_t>(layout_.g_offset + i)] = amp_g;
    const int n = cfg_.ris_count();
    for (int k = 0; k < cfg_.num_users(); ++k) {
        const double d_u = (cfg_.users[static_cast<size_t>(k)] - cfg_.q_ris).norm();
        const double amp_u = std::sqrt(cfg_.beta0 / std::pow(d_u, cfg_.ris_user_pl_exp));
        const int base = layout_.users_offset + 2 * n * k;
        for (int i = 0; i < 2 * n; ++i) s[static_cast<size_t>(base + i)] = amp_u;
    }
    const double coord = std::max(cfg_.area_side, cfg_.q_ris.z);
    for (int i = layout_.ris_pos_offset; i < layout_.prev_action_offset; ++i) s[static_cast<size_t>(i)] = coord;
    int idx = layout_.prev_action_offset;
    s[static_cast<size_t>(idx++)] = 1.0;
    for (int k = 0; k < cfg_.num_users(); ++k) s[static_cast<size_t>(idx++)] = std::max(cfg_.p_u_max, 1e-12);
    for (int i = 0; i < n; ++i) s[static_cast<size_t>(idx++)] = 2.0 * kPi;
    return s;
}

FeasibilityReport feasibility_probe(const SystemConfig& cfg, int trials, std::mt19937_64& rng) {
    if (trials < 1) throw std::invalid_argument("feasibility_probe: trials must be >= 1");
    const double per_user = std::min(cfg.p_u_max, cfg.p_bs_max / cfg.num_users());
    const std::vector<double> powers(static_cast<size_t>(cfg.num_users()), per_user);

    int feasible = 0;
    for (int t = 0; t < trials; ++t) {
        const ChannelRealization real = realize_slot(cfg, rng);
        auto [phases, min_snr] = coordinate_ascent_phases(real, cfg, powers, 16, 10);
        (void)phases;
        const double worst_rate = user_rate(0.0, cfg.bandwidth, min_snr);
        if (worst_rate >= cfg.r_min) ++feasible;
    }

    FeasibilityReport report;
    report.trials = trials;
    report.fraction = static_cast<double>(feasible) / trials;
    report.warn = report.fraction < 0.5;
    return report;
}

}  // namespace uavris

// SPDX-License-Identifier: Apache-2.0
#include "uavris/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace uavris {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kMaxGridCardinality = 1e7;

double closed_level(int i, int count, double hi) {
    if (count <= 1) return 0.0;
    return hi * static_cast<double>(i) / (count - 1);
}

double phase_level(int l, int count) { return kTwoPi * static_cast<double>(l) / count; }

bool advance(std::vector<int>& digits, int base) {
    for (int pos = static_cast<int>(digits.size()) - 1; pos >= 0; --pos) {
        if (++digits[static_cast<size_t>(pos)] < base) return true;
        digits[static_cast<size_t>(pos)] = 0;
    }
    return false;
}

}  // namespace

SearchOutcome brute_force_oracle(const ChannelRealization& real, const SearchGrid& grid,
                                 const SystemConfig& cfg) {
    const int k = cfg.num_users();
    const int n = cfg.ris_count();
    const double cardinality = static_cast<double>(grid.tau_levels) *
                               std::pow(static_cast<double>(grid.power_levels), k) *
                               std::pow(static_cast<double>(grid.phase_levels), n);
    if (!(cardinality <= kMaxGridCardinality))
        throw std::invalid_argument("brute_force_oracle: grid cardinality " +
                                    std::to_string(cardinality) + " exceeds 1e7");

    SearchOutcome best;
    best.reward = -1.0;
    Action a;
    a.powers.resize(static_cast<size_t>(k));
    a.phases.resize(static_cast<size_t>(n));

    for (int ti = 0; ti < grid.tau_levels; ++ti) {
        a.tau = closed_level(ti, grid.tau_levels, 1.0);
        std::vector<int> p_idx(static_cast<size_t>(k), 0);
        do {
            for (int u = 0; u < k; ++u)
                a.powers[static_cast<size_t>(u)] = closed_level(p_idx[static_cast<size_t>(u)],
                                                                grid.power_levels, cfg.p_u_max);
            std::vector<int> ph_idx(static_cast<size_t>(n), 0);
            do {
                for (int e = 0; e < n; ++e)
                    a.phases[static_cast<size_t>(e)] = phase_level(ph_idx[static_cast<size_t>(e)],
                                                                   grid.phase_levels);
                const auto [reward, info] = evaluate_action(cfg, real, a);
                (void)info;
                if (reward > best.reward) {
                    best.reward = reward;
                    best.action = a;
                }
            } while (advance(ph_idx, grid.phase_levels));
        } while (advance(p_idx, grid.power_levels));
    }
    if (best.reward < 0.0) best.reward = 0.0;
    return best;
}

SearchOutcome guided_search(const ChannelRealization& real, const SearchGrid& grid,
                            const SystemConfig& cfg) {
    const int k = cfg.num_users();
    const double full = std::min(cfg.p_u_max, cfg.p_bs_max / k);
    const std::vector<double> full_powers(static_cast<size_t>(k), full);

    auto [phases, min_snr] = coordinate_ascent_phases(real, cfg, full_powers, grid.phase_levels, 10);
    (void)min_snr;

    SearchOutcome best;
    best.action.tau = 0.0;
    best.action.powers.assign(static_cast<size_t>(k), 0.0);
    best.action.phases = phases.values();
    best.reward = 0.0;

    const EHParams eh = eh_params(cfg);
    std::vector<double> powers(static_cast<size_t>(k));
    std::vector<int> p_idx(static_cast<size_t>(k), 0);
    do {
        for (int u = 0; u < k; ++u)
            powers[static_cast<size_t>(u)] =
                closed_level(p_idx[static_cast<size_t>(u)], grid.power_levels, cfg.p_u_max);
        const std::vector<double> projected = project_powers(powers, cfg.p_bs_max);
        const Precoder prec = mrt_precoder(real, phases, projected, cfg.p_bs_max);

        std::vector<double> gammas(static_cast<size_t>(k));
        for (int u = 0; u < k; ++u)
            gammas[static_cast<size_t>(u)] = user_snr(real, phases, prec, u, cfg.noise_power);

        // rates fall in tau while efficiency rises, so the largest feasible
        // grid tau is optimal for this power combination
        double tau = -1.0;
        for (int ti = grid.tau_levels - 1; ti >= 0; --ti) {
            const double cand = closed_level(ti, grid.tau_levels, 1.0);
            bool ok = true;
            for (int u = 0; u < k && ok; ++u)
                ok = user_rate(cand, cfg.bandwidth, gammas[static_cast<size_t>(u)]) >= cfg.r_min;
            if (ok) {
                tau = cand;
                break;
            }
        }
        if (tau < 0.0) continue;

        const double eps_r = received_rf_power(real, prec);
        const double reward = eh_efficiency(tau, eps_r, eh);
        if (reward > best.reward) {
            best.reward = reward;
            best.action.tau = tau;
            best.action.powers = projected;
            best.action.phases = phases.values();
        }
    } while (advance(p_idx, grid.power_levels));

    return best;
}

SearchOutcome random_policy(const ChannelRealization& real, const SystemConfig& cfg,
                            std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    Action a;
    a.tau = u01(rng);
    a.powers.resize(static_cast<size_t>(cfg.num_users()));
    for (auto& p : a.powers) p = u01(rng) * cfg.p_u_max;
    a.powers = project_powers(std::move(a.powers), cfg.p_bs_max);
    a.phases.resize(static_cast<size_t>(cfg.ris_count()));
    for (auto& t : a.phases) t = u01(rng) * kTwoPi;

    SearchOutcome out;
    const auto [reward, info] = evaluate_action(cfg, real, a);
    (void)info;
    out.action = std::move(a);
    out.reward = reward;
    return out;
}

}  // namespace uavris

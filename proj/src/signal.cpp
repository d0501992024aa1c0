// SPDX-License-Identifier: Apache-2.0
#include "uavris/signal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace uavris {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double wrap_angle(double theta) {
    double w = theta - kTwoPi * std::floor(theta / kTwoPi);
    if (w >= kTwoPi) w -= kTwoPi;
    return w;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void check_tau(double tau) {
    if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("tau must lie in [0, 1]");
}

}  // namespace

PhaseShifts::PhaseShifts(std::vector<double> theta) : theta_(std::move(theta)) {
    for (auto& t : theta_) t = wrap_angle(t);
}

cdouble PhaseShifts::coefficient(int n) const {
    return std::polar(1.0, theta_[static_cast<size_t>(n)]);
}

EHParams eh_params(const SystemConfig& cfg) { return {cfg.p_sat, cfg.eh_c, cfg.eh_d}; }

std::vector<double> project_powers(std::vector<double> powers, double p_bs_max) {
    double total = 0.0;
    for (double p : powers) {
        if (p < 0.0) throw std::invalid_argument("project_powers: negative power");
        total += p;
    }
    if (total > p_bs_max && total > 0.0) {
        const double scale = p_bs_max / total;
        for (auto& p : powers) p *= scale;
    }
    return powers;
}

CVec cascade_row(const ChannelRealization& real, const PhaseShifts& phases, int k) {
    const CMat& g = real.g_bs_ris;
    const CVec& gu = real.g_users[static_cast<size_t>(k)];
    CVec row(static_cast<size_t>(g.cols), cdouble(0.0, 0.0));
    for (int n = 0; n < g.rows; ++n) {
        const cdouble w = std::conj(gu[static_cast<size_t>(n)]) * phases.coefficient(n);
        const cdouble* grow = &g.a[static_cast<size_t>(n) * g.cols];
        for (int c = 0; c < g.cols; ++c) row[static_cast<size_t>(c)] += w * grow[c];
    }
    return row;
}

Precoder mrt_precoder(const ChannelRealization& real, const PhaseShifts& phases,
                      const std::vector<double>& powers, double p_bs_max) {
    const int k_count = static_cast<int>(real.g_users.size());
    if (static_cast<int>(powers.size()) != k_count)
        throw std::invalid_argument("mrt_precoder: powers size mismatch");
    double total = 0.0;
    for (double p : powers) {
        if (p < 0.0) throw std::invalid_argument("mrt_precoder: negative power");
        total += p;
    }
    if (total > p_bs_max * (1.0 + 1e-9))
        throw std::invalid_argument("mrt_precoder: total power exceeds P_BS_max");

    const int m = real.g_bs_ris.cols;
    Precoder prec;
    prec.powers = powers;
    prec.beams.resize(static_cast<size_t>(k_count));
    prec.used_fallback.assign(static_cast<size_t>(k_count), false);

    for (int k = 0; k < k_count; ++k) {
        CVec row = cascade_row(real, phases, k);
        const double nrm = std::sqrt(norm2(row));
        CVec beam(static_cast<size_t>(m), cdouble(0.0, 0.0));
        const double amp = std::sqrt(powers[static_cast<size_t>(k)]);
        if (nrm > 0.0) {
            for (int c = 0; c < m; ++c)
                beam[static_cast<size_t>(c)] = amp * std::conj(row[static_cast<size_t>(c)]) / nrm;
        } else {
            beam[0] = amp;
            prec.used_fallback[static_cast<size_t>(k)] = true;
        }
        prec.beams[static_cast<size_t>(k)] = std::move(beam);
    }
    return prec;
}

double received_rf_power(const ChannelRealization& real, const Precoder& prec) {
    const CMat& g = real.g_bs_ris;
    double total = 0.0;
    for (int n = 0; n < g.rows; ++n) {
        const cdouble* grow = &g.a[static_cast<size_t>(n) * g.cols];
        for (const auto& beam : prec.beams) {
            cdouble acc(0.0, 0.0);
            for (int c = 0; c < g.cols; ++c) acc += grow[c] * beam[static_cast<size_t>(c)];
            total += std::norm(acc);
        }
    }
    return total;
}

double rf_input_power(double tau, double eps_r) {
    check_tau(tau);
    if (eps_r < 0.0) throw std::invalid_argument("rf_input_power: negative incident power");
    return tau * eps_r;
}

double harvested_power_nl(double p_rf, const EHParams& eh) {
    if (p_rf < 0.0) throw std::invalid_argument("harvested_power_nl: negative input power");
    const double delta = sigmoid(eh.c_nl * (0.0 - eh.d_nl));
    const double s = sigmoid(eh.c_nl * (p_rf - eh.d_nl));
    return eh.p_sat * (s - delta) / (1.0 - delta);
}

double eh_efficiency(double tau, double eps_r, const EHParams& eh) {
    check_tau(tau);
    if (eps_r <= 0.0) return 0.0;
    return harvested_power_nl(tau * eps_r, eh) / eps_r;
}

double user_snr(const ChannelRealization& real, const PhaseShifts& phases, const Precoder& prec,
                int k, double noise_power) {
    if (k < 0 || k >= static_cast<int>(real.g_users.size()))
        throw std::out_of_range("user_snr: user index");
    const CVec row = cascade_row(real, phases, k);
    auto beam_power = [&](const CVec& beam) {
        cdouble acc(0.0, 0.0);
        for (size_t c = 0; c < row.size(); ++c) acc += row[c] * beam[c];
        return std::norm(acc);
    };
    const double signal = beam_power(prec.beams[static_cast<size_t>(k)]);
    double interference = 0.0;
    for (size_t u = 0; u < prec.beams.size(); ++u)
        if (u != static_cast<size_t>(k)) interference += beam_power(prec.beams[u]);
    return signal / (interference + noise_power);
}

double user_rate(double tau, double bandwidth, double gamma_k) {
    check_tau(tau);
    if (gamma_k < 0.0) throw std::invalid_argument("user_rate: negative SNR");
    return (1.0 - tau) * bandwidth * std::log2(1.0 + gamma_k);
}

std::pair<PhaseShifts, double> coordinate_ascent_phases(const ChannelRealization& real,
                                                        const SystemConfig& cfg,
                                                        const std::vector<double>& powers,
                                                        int levels, int max_sweeps) {
    if (levels < 1) throw std::invalid_argument("coordinate_ascent_phases: levels must be >= 1");
    const int n = real.g_bs_ris.rows;
    std::vector<double> theta(static_cast<size_t>(n), 0.0);

    auto min_snr = [&](const PhaseShifts& ph) {
        const Precoder prec = mrt_precoder(real, ph, powers, cfg.p_bs_max);
        double worst = std::numeric_limits<double>::infinity();
        for (int k = 0; k < static_cast<int>(real.g_users.size()); ++k)
            worst = std::min(worst, user_snr(real, ph, prec, k, cfg.noise_power));
        return worst;
    };

    double best = min_snr(PhaseShifts(theta));
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool improved = false;
        for (int e = 0; e < n; ++e) {
            const double saved = theta[static_cast<size_t>(e)];
            double best_theta = saved;
            for (int l = 0; l < levels; ++l) {
                const double cand = kTwoPi * l / levels;
                if (cand == saved) continue;
                theta[static_cast<size_t>(e)] = cand;
                const double score = min_snr(PhaseShifts(theta));
                if (score > best) {
                    best = score;
                    best_theta = cand;
                    improved = true;
                }
            }
            theta[static_cast<size_t>(e)] = best_theta;
        }
        if (!improved) break;
    }
    return {PhaseShifts(theta), best};
}

}  // namespace uavris

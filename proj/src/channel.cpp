// SPDX-License-Identifier: Apache-2.0
#include "uavris/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace uavris {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInvSqrt2 = 0.70710678118654752440;

cdouble circular_gaussian(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, kInvSqrt2);
    const double re = gauss(rng);
    const double im = gauss(rng);
    return {re, im};
}

}  // namespace

double los_probability(double elevation_deg, double a, double b) {
    return 1.0 / (1.0 + a * std::exp(-b * (elevation_deg - a)));
}

std::pair<CMat, double> bs_ris_channel(const SystemConfig& cfg, const JitterAngles& jitter,
                                       std::mt19937_64& rng) {
    const Vec3 v = cfg.q_ris - cfg.q_bs;
    const double d = v.norm();
    if (d <= 0.0) throw std::invalid_argument("bs_ris_channel: BS and RIS positions coincide");

    const double beta = cfg.beta0 / (d * d);
    const double elevation_deg = (180.0 / kPi) * std::asin((cfg.q_ris.z - cfg.q_bs.z) / d);
    const double p_los = los_probability(elevation_deg, cfg.atg_a, cfg.atg_b);

    const RotationMatrix rot = rotation_from_jitter(jitter);
    const LinkAngles arrival = recompute_angles(rotate(rot, v), kUnitZ);
    const LinkAngles departure = recompute_angles(v, kUnitZ);  // BS is static

    const CVec alpha_r = steering_vector(cfg.ris_array, arrival, cfg.wavelength);
    const CVec alpha_t = steering_vector(cfg.bs_array, departure, cfg.wavelength);

    const int n = cfg.ris_count();
    const int m = cfg.bs_count();
    const cdouble delay = std::polar(1.0, -2.0 * kPi * d / cfg.wavelength);
    const double w_los = std::sqrt(p_los);
    const double w_nlos = std::sqrt(1.0 - p_los);
    const double amp = std::sqrt(beta);

    CMat g(n, m);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < m; ++c) {
            const cdouble los = delay * alpha_r[static_cast<size_t>(r)] * std::conj(alpha_t[static_cast<size_t>(c)]);
            const cdouble nlos = circular_gaussian(rng);
            g(r, c) = amp * (w_los * los + w_nlos * nlos);
        }
    return {std::move(g), p_los};
}

CVec ris_user_channel(const SystemConfig& cfg, int k, const JitterAngles& jitter,
                      std::mt19937_64& rng) {
    if (k < 0 || k >= cfg.num_users()) throw std::out_of_range("ris_user_channel: user index");

    const Vec3 v = cfg.users[static_cast<size_t>(k)] - cfg.q_ris;
    const double d = v.norm();
    const double beta = cfg.beta0 / std::pow(d, cfg.ris_user_pl_exp);

    const RotationMatrix rot = rotation_from_jitter(jitter);
    const LinkAngles departure = recompute_angles(rotate(rot, v), kUnitZ * -1.0);
    const CVec alpha_t = steering_vector(cfg.ris_array, departure, cfg.wavelength);

    const cdouble delay = std::polar(1.0, -2.0 * kPi * d / cfg.wavelength);
    const double w_los = std::sqrt(cfg.rician_k / (1.0 + cfg.rician_k));
    const double w_nlos = std::sqrt(1.0 / (1.0 + cfg.rician_k));
    const double amp = std::sqrt(beta);

    CVec g(static_cast<size_t>(cfg.ris_count()));
    for (size_t i = 0; i < g.size(); ++i)
        g[i] = amp * (w_los * delay * alpha_t[i] + w_nlos * circular_gaussian(rng));
    return g;
}

ChannelRealization realize_slot(const SystemConfig& cfg, std::mt19937_64& rng) {
    ChannelRealization real;
    real.jitter = sample_jitter(cfg.sigma_j, rng);
    auto [g, p_los] = bs_ris_channel(cfg, real.jitter, rng);
    real.g_bs_ris = std::move(g);
    real.p_los = p_los;
    real.g_users.reserve(static_cast<size_t>(cfg.num_users()));
    for (int k = 0; k < cfg.num_users(); ++k)
        real.g_users.push_back(ris_user_channel(cfg, k, real.jitter, rng));
    return real;
}

}  // namespace uavris

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "uavris/channel.hpp"
#include "uavris/linalg.hpp"

namespace uavris {

// Per-element reflection phases, wrapped into [0, 2*pi).
class PhaseShifts {
public:
    PhaseShifts() = default;
    explicit PhaseShifts(std::vector<double> theta);

    int size() const { return static_cast<int>(theta_.size()); }
    double operator[](int n) const { return theta_[static_cast<size_t>(n)]; }
    const std::vector<double>& values() const { return theta_; }
    cdouble coefficient(int n) const;  // e^{j*theta_n}

private:
    std::vector<double> theta_;
};

// Per-user beamforming vectors with ||V_k||^2 == p_k.
struct Precoder {
    std::vector<CVec> beams;          // K vectors of length M
    std::vector<double> powers;       // W
    std::vector<bool> used_fallback;  // true where the cascaded channel vanished
};

struct EHParams {
    double p_sat = 2.0;
    double c_nl = 6400.0;
    double d_nl = 0.003;
};

EHParams eh_params(const SystemConfig& cfg);

// Scales the power vector uniformly so the total respects p_bs_max.
std::vector<double> project_powers(std::vector<double> powers, double p_bs_max);

// Effective (conjugated) channel row g_k^H Theta G for user k, length M.
CVec cascade_row(const ChannelRealization& real, const PhaseShifts& phases, int k);

// Maximum-ratio beams along the cascaded channel of each user.
Precoder mrt_precoder(const ChannelRealization& real, const PhaseShifts& phases,
                      const std::vector<double>& powers, double p_bs_max);

// Total RF power incident on the RIS elements (expectation over unit-variance
// symbols), summed per element and per user beam.
double received_rf_power(const ChannelRealization& real, const Precoder& prec);

// Energy-harvesting share of the slot: tau * eps_r.
double rf_input_power(double tau, double eps_r);

// Sigmoid-saturation harvester. Exactly zero at zero input, bounded by p_sat.
double harvested_power_nl(double p_rf, const EHParams& eh);

// Harvested power divided by incident power; zero when nothing is incident.
double eh_efficiency(double tau, double eps_r, const EHParams& eh);

// SINR at user k, interference summed over the other users' beams.
double user_snr(const ChannelRealization& real, const PhaseShifts& phases, const Precoder& prec,
                int k, double noise_power);

// Achievable rate in bit/s over the transmission share of the slot.
double user_rate(double tau, double bandwidth, double gamma_k);

// Per-element coordinate ascent of the minimum user SINR over `levels`
// quantized phase values; stops when a full sweep yields no strict
// improvement or after max_sweeps. Returns the phases and the attained
// minimum SINR.
std::pair<PhaseShifts, double> coordinate_ascent_phases(const ChannelRealization& real,
                                                        const SystemConfig& cfg,
                                                        const std::vector<double>& powers,
                                                        int levels, int max_sweeps);

}  // namespace uavris

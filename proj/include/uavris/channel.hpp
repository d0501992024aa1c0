// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>
#include <utility>
#include <vector>

#include "uavris/config.hpp"
#include "uavris/geometry.hpp"
#include "uavris/linalg.hpp"

namespace uavris {

// One time slot's channel draw: BS-to-RIS matrix (N x M) and the K RIS-to-user
// vectors (length N), together with the jitter that produced the angles.
struct ChannelRealization {
    CMat g_bs_ris;            // G
    std::vector<CVec> g_users;
    JitterAngles jitter;
    double p_los = 0.0;
};

// Logistic LoS probability of the air-to-ground model as a function of the
// elevation angle in degrees.
double los_probability(double elevation_deg, double a, double b);

// BS-to-RIS channel. RIS arrival angles see the jitter rotation; BS departure
// angles use the unrotated geometry. Returns the matrix and the LoS
// probability used in the mix.
std::pair<CMat, double> bs_ris_channel(const SystemConfig& cfg, const JitterAngles& jitter,
                                       std::mt19937_64& rng);

// RIS-to-user Rician link for user k (0-based). Departure angles toward the
// user see the jitter rotation.
CVec ris_user_channel(const SystemConfig& cfg, int k, const JitterAngles& jitter,
                      std::mt19937_64& rng);

// Draws one slot: a single jitter sample shared by all links, then fresh
// fading for every link.
ChannelRealization realize_slot(const SystemConfig& cfg, std::mt19937_64& rng);

}  // namespace uavris

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>

#include "uavris/env.hpp"

namespace uavris {

// Discretization of the one-slot action space. tau and power levels span
// their closed intervals (a single level sits at the lower bound); phase
// levels are 2*pi*l/L over [0, 2*pi).
struct SearchGrid {
    int tau_levels = 21;
    int power_levels = 6;
    int phase_levels = 16;
};

struct SearchOutcome {
    Action action;
    double reward = 0.0;
};

// Exact maximizer of the QoS-gated efficiency over the full Cartesian grid.
// Refuses (with the offending count in the message) when the grid cardinality
// exceeds 1e7. Ties keep the lexicographically first point.
SearchOutcome brute_force_oracle(const ChannelRealization& real, const SearchGrid& grid,
                                 const SystemConfig& cfg);

// Structured search: coordinate-ascent phases on the minimum user SINR, a
// grid sweep over power combinations, and the largest grid tau that keeps
// every user above R_min. Falls back to a zero-power action when no grid
// point is QoS-feasible.
SearchOutcome guided_search(const ChannelRealization& real, const SearchGrid& grid,
                            const SystemConfig& cfg);

// Uniform action within bounds, evaluated once.
SearchOutcome random_policy(const ChannelRealization& real, const SystemConfig& cfg,
                            std::mt19937_64& rng);

}  // namespace uavris

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "uavris/channel.hpp"
#include "uavris/config.hpp"
#include "uavris/signal.hpp"

namespace uavris {

// Physical decision variables of one slot.
struct Action {
    double tau = 0.0;
    std::vector<double> powers;  // W, one per user
    std::vector<double> phases;  // rad, one per RIS element
};

struct StepInfo {
    std::vector<double> rates;  // bit/s per user
    double eh_eff = 0.0;
    bool qos = false;
    double eps_r = 0.0;  // incident RF power, W
    double p_rf = 0.0;   // tau-scaled input to the harvester, W
    Action applied;      // post-projection action actually transmitted
};

struct StepResult {
    double reward = 0.0;
    std::vector<double> next_state;
    bool done = false;
    StepInfo info;
};

// Minimal environment surface the training loop drives. Raw actions live in
// [-1, 1]^action_dim.
class EnvBase {
public:
    virtual ~EnvBase() = default;
    virtual int state_dim() const = 0;
    virtual int action_dim() const = 0;
    virtual std::vector<double> reset(std::uint64_t seed) = 0;
    virtual StepResult step_raw(const std::vector<double>& raw) = 0;
    // Per-dimension divisors bringing state entries to O(1); identity here.
    virtual std::vector<double> state_scale() const { return std::vector<double>(state_dim(), 1.0); }
};

// Offsets of the flat state blocks: Re/Im of G, Re/Im of every user link,
// RIS element coordinates, user coordinates, previous action.
struct StateLayout {
    int g_offset = 0;
    int users_offset = 0;
    int ris_pos_offset = 0;
    int user_pos_offset = 0;
    int prev_action_offset = 0;
    int dim = 0;
};

StateLayout state_layout(const SystemConfig& cfg);

// Evaluates one slot without touching environment state: projects powers,
// builds the maximum-ratio precoder, and applies the QoS-gated reward rule.
std::pair<double, StepInfo> evaluate_action(const SystemConfig& cfg,
                                            const ChannelRealization& real, const Action& a);

class RisEnv final : public EnvBase {
public:
    explicit RisEnv(SystemConfig cfg);

    int state_dim() const override { return layout_.dim; }
    int action_dim() const override { return 1 + cfg_.num_users() + cfg_.ris_count(); }

    std::vector<double> reset(std::uint64_t seed) override;
    StepResult step_raw(const std::vector<double>& raw) override;
    std::vector<double> state_scale() const override;

    // Affine map from the normalized cube to the physical action box,
    // followed by the total-power projection.
    Action scale_action(const std::vector<double>& raw) const;

    StepResult step(const Action& a);

    const SystemConfig& config() const { return cfg_; }
    const ChannelRealization& current_realization() const { return realization_; }
    int slot() const { return slot_; }

private:
    std::vector<double> encode_state(const Action& prev) const;

    SystemConfig cfg_;
    StateLayout layout_;
    std::vector<Vec3> ris_positions_;
    std::mt19937_64 rng_;
    ChannelRealization realization_;
    Action prev_action_;
    int slot_ = 0;
    bool active_ = false;
};

struct FeasibilityReport {
    double fraction = 0.0;
    int trials = 0;
    bool warn = false;  // set when fewer than half the slots admit a QoS-feasible action
};

// Monte-Carlo estimate of the fraction of slots where every user's rate
// constraint can be met at tau = 0 with full power and coordinate-ascent
// phases.
FeasibilityReport feasibility_probe(const SystemConfig& cfg, int trials, std::mt19937_64& rng);

}  // namespace uavris

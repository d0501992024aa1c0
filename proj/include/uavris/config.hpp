// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavris/geometry.hpp"

namespace uavris {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fully resolved physical and deployment parameters. All values are linear
// (dB/dBm fields of the config file are converted exactly once at load).
struct SystemConfig {
    // deployment geometry (meters)
    double area_side = 20.0;
    Vec3 q_bs{0.0, 0.0, 10.0};
    Vec3 q_ris{10.0, 10.0, 25.0};
    std::vector<Vec3> users;  // ground users, z = 0
    std::uint64_t user_seed = 1;

    // arrays: BS first axis = horizontal (M_y), second = vertical (M_z);
    // RIS first axis = x (N_x), second = y (N_y)
    PlanarArrayGeometry bs_array{2, 2, 0.0, 0.0};
    PlanarArrayGeometry ris_array{4, 4, 0.0, 0.0};

    // radio
    double wavelength = 0.12491352416666666;  // m (2.4 GHz carrier)
    double beta0 = 1e-3;                      // reference path loss, linear
    double atg_a = 9.61;
    double atg_b = 0.16;
    double rician_k = 10.0;       // linear
    double ris_user_pl_exp = 1.0; // exponent on the RIS-user distance
    double noise_power = 6.309573444801943e-14;  // W (-102 dBm)
    double bandwidth = 2e8;                      // Hz
    double p_bs_max = 500.0;                     // W
    double p_u_max = 500.0 / 3.0;                // W per user
    double r_min = 7e7;                          // bit/s

    // nonlinear harvester; p_sat sits below typical incident power so the
    // efficiency ratio stays inside [0, 1]
    double p_sat = 0.002;  // W
    double eh_c = 6400.0;
    double eh_d = 0.003;   // W

    // dynamics
    double sigma_j = 0.1;        // rad
    int slots_per_episode = 50;  // T

    int num_users() const { return static_cast<int>(users.size()); }
    int bs_count() const { return bs_array.count(); }    // M
    int ris_count() const { return ris_array.count(); }  // N

    // throws ConfigError on violated invariants
    void validate() const;
};

// Defaults with K users placed uniformly at random in the area (seeded).
SystemConfig default_config(int num_users = 3, std::uint64_t user_seed = 1);

// Plain-text `key = value` file, '#' comments. Unknown or missing required
// keys raise ConfigError with the offending key (and line where applicable).
SystemConfig load_config(const std::string& path);

// Same parser operating on an in-memory string (used by tests).
SystemConfig parse_config(const std::string& text);

}  // namespace uavris

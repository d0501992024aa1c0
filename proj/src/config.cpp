// SPDX-License-Identifier: Apache-2.0
#include "uavris/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

namespace uavris {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

// squarest factorization n = a*b with a <= b
std::pair<int, int> factor_square(int n) {
    for (int a = static_cast<int>(std::sqrt(static_cast<double>(n))); a >= 1; --a)
        if (n % a == 0) return {a, n / a};
    return {1, n};
}

std::vector<Vec3> place_users(int k, double area_side, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, area_side);
    std::vector<Vec3> users;
    users.reserve(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) {
        const double x = u(rng);
        const double y = u(rng);
        users.push_back({x, y, 0.0});
    }
    return users;
}

struct KeyValue {
    std::string value;
    int line = 0;
    bool used = false;
};

}  // namespace

void SystemConfig::validate() const {
    auto require = [](bool cond, const std::string& what) {
        if (!cond) throw ConfigError("invalid config: " + what);
    };
    require(num_users() >= 1, "K must be >= 1");
    require(wavelength > 0.0, "wavelength must be > 0");
    require(beta0 > 0.0 && beta0 <= 1.0, "beta0 must be in (0, 1]");
    require(atg_a > 0.0, "a must be > 0");
    require(atg_b >= 0.0, "b must be >= 0");
    require(rician_k >= 0.0, "K_H must be >= 0");
    require(noise_power > 0.0, "noise power must be > 0");
    require(bandwidth > 0.0, "bandwidth must be > 0");
    require(p_bs_max >= 0.0, "P_BS_max must be >= 0");
    require(p_u_max >= 0.0, "P_U_max must be >= 0");
    require(r_min >= 0.0, "R_min must be >= 0");
    require(p_sat > 0.0 && eh_c > 0.0 && eh_d > 0.0, "EH parameters must be > 0");
    require(sigma_j >= 0.0, "sigma_j must be >= 0");
    require(slots_per_episode >= 1, "T must be >= 1");
    require(bs_array.n_first >= 1 && bs_array.n_second >= 1, "BS array counts must be >= 1");
    require(ris_array.n_first >= 1 && ris_array.n_second >= 1, "RIS array counts must be >= 1");
    require(bs_array.spacing_first > 0.0 && bs_array.spacing_second > 0.0, "BS spacings must be > 0");
    require(ris_array.spacing_first > 0.0 && ris_array.spacing_second > 0.0, "RIS spacings must be > 0");
    require((q_ris - q_bs).norm() > 0.0, "BS and RIS positions coincide");
    for (const auto& u : users) require((q_ris - u).norm() > 0.0, "a user coincides with the RIS");
}

SystemConfig default_config(int num_users, std::uint64_t user_seed) {
    SystemConfig cfg;
    const double half = cfg.wavelength / 2.0;
    cfg.bs_array.spacing_first = cfg.bs_array.spacing_second = half;
    cfg.ris_array.spacing_first = cfg.ris_array.spacing_second = half;
    cfg.q_ris = {cfg.area_side / 2.0, cfg.area_side / 2.0, 25.0};
    cfg.user_seed = user_seed;
    cfg.users = place_users(num_users, cfg.area_side, user_seed);
    cfg.p_u_max = cfg.p_bs_max / num_users;
    cfg.validate();
    return cfg;
}

SystemConfig parse_config(const std::string& text) {
    std::map<std::string, KeyValue> kv;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected `key = value`");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": expected `key = value`");
        if (kv.count(key))
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key `" + key + "`");
        kv[key] = {value, line_no, false};
    }

    auto get_raw = [&](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        it->second.used = true;
        return it->second.value;
    };
    auto parse_num = [&](const std::string& key, const std::string& raw) {
        try {
            size_t pos = 0;
            const double v = std::stod(raw, &pos);
            if (pos != raw.size()) throw std::invalid_argument(raw);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("line " + std::to_string(kv[key].line) + ": key `" + key +
                              "` has non-numeric value `" + raw + "`");
        }
    };
    auto required = [&](const std::string& key) {
        auto raw = get_raw(key);
        if (!raw) throw ConfigError("missing required key `" + key + "`");
        return parse_num(key, *raw);
    };
    auto optional_num = [&](const std::string& key, double fallback) {
        auto raw = get_raw(key);
        return raw ? parse_num(key, *raw) : fallback;
    };
    auto optional_int = [&](const std::string& key, int fallback) {
        const double v = optional_num(key, fallback);
        if (v != std::floor(v)) throw ConfigError("key `" + key + "` must be an integer");
        return static_cast<int>(v);
    };

    SystemConfig cfg;

    // Table I block (required)
    cfg.area_side = required("area");
    const int n_total = static_cast<int>(required("N"));
    cfg.atg_a = required("a");
    cfg.atg_b = required("b");
    cfg.beta0 = db_to_linear(required("beta0_db"));
    cfg.noise_power = dbm_to_watt(required("sigma_k2_dbm"));
    cfg.p_bs_max = required("P_BS_max");
    cfg.r_min = required("R_min_mbps") * 1e6;
    cfg.eh_c = required("c");
    cfg.eh_d = required("d");
    const int k = static_cast<int>(required("K"));

    // deployment defaults
    const double carrier_ghz = optional_num("carrier_ghz", 2.4);
    cfg.wavelength = kSpeedOfLight / (carrier_ghz * 1e9);
    const double half = cfg.wavelength / 2.0;
    cfg.q_bs = {optional_num("bs_x", 0.0), optional_num("bs_y", 0.0), optional_num("H_BS", 10.0)};
    cfg.q_ris = {optional_num("ris_x", cfg.area_side / 2.0), optional_num("ris_y", cfg.area_side / 2.0),
                 optional_num("H_RIS", 25.0)};

    const auto [nx_default, ny_default] = factor_square(n_total);
    cfg.ris_array.n_first = optional_int("N_x", nx_default);
    cfg.ris_array.n_second = optional_int("N_y", ny_default);
    if (cfg.ris_array.count() != n_total)
        throw ConfigError("N_x * N_y must equal N");
    const int m_total = optional_int("M", 4);
    const auto [my_default, mz_default] = factor_square(m_total);
    cfg.bs_array.n_first = optional_int("M_y", my_default);
    cfg.bs_array.n_second = optional_int("M_z", mz_default);
    if (cfg.bs_array.count() != m_total)
        throw ConfigError("M_y * M_z must equal M");
    cfg.bs_array.spacing_first = optional_num("bs_spacing_y", half);
    cfg.bs_array.spacing_second = optional_num("bs_spacing_z", half);
    cfg.ris_array.spacing_first = optional_num("ris_spacing_x", half);
    cfg.ris_array.spacing_second = optional_num("ris_spacing_y", half);

    // radio defaults
    cfg.rician_k = db_to_linear(optional_num("K_H_db", 10.0));
    cfg.bandwidth = optional_num("B_mhz", 200.0) * 1e6;
    cfg.ris_user_pl_exp = optional_num("ris_user_pl_exp", 1.0);
    cfg.p_u_max = optional_num("P_U_max", cfg.p_bs_max / k);
    cfg.p_sat = optional_num("P_sat", 0.002);
    cfg.sigma_j = optional_num("sigma_j", 0.1);
    cfg.slots_per_episode = optional_int("T", 50);

    cfg.user_seed = static_cast<std::uint64_t>(optional_num("user_seed", 1.0));
    cfg.users = place_users(k, cfg.area_side, cfg.user_seed);

    for (const auto& [key, entry] : kv)
        if (!entry.used)
            throw ConfigError("line " + std::to_string(entry.line) + ": unknown key `" + key + "`");

    cfg.validate();
    return cfg;
}

SystemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace uavris

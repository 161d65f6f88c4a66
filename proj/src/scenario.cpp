#include "uavswarm/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace uavswarm {

namespace {

std::string join_issues(const std::vector<ConfigIssue>& issues) {
    std::string out = "invalid scenario:";
    for (const auto& i : issues) {
        out += " [" + i.field + "] " + i.message + ";";
    }
    return out;
}

enum class FieldKind { Int, Real };

struct FieldDesc {
    std::string_view key;
    FieldKind kind;
    int ScenarioConfig::*int_ptr;
    double ScenarioConfig::*real_ptr;
};

constexpr FieldDesc int_field(std::string_view key, int ScenarioConfig::*p) {
    return {key, FieldKind::Int, p, nullptr};
}
constexpr FieldDesc real_field(std::string_view key, double ScenarioConfig::*p) {
    return {key, FieldKind::Real, nullptr, p};
}

const std::vector<FieldDesc>& fields() {
    static const std::vector<FieldDesc> table = {
        int_field("n_uavs", &ScenarioConfig::n_uavs),
        int_field("m_available", &ScenarioConfig::m_available),
        int_field("m_occupied", &ScenarioConfig::m_occupied),
        real_field("coverage_radius_m", &ScenarioConfig::coverage_radius_m),
        real_field("swarm_radius_m", &ScenarioConfig::swarm_radius_m),
        real_field("swarm_altitude_m", &ScenarioConfig::swarm_altitude_m),
        real_field("min_separation_m", &ScenarioConfig::min_separation_m),
        real_field("pathloss_exp_cell", &ScenarioConfig::pathloss_exp_cell),
        real_field("pathloss_exp_d2d", &ScenarioConfig::pathloss_exp_d2d),
        real_field("rician_k", &ScenarioConfig::rician_k),
        real_field("ref_gain_cell_db", &ScenarioConfig::ref_gain_cell_db),
        real_field("ref_gain_d2d_db", &ScenarioConfig::ref_gain_d2d_db),
        real_field("tx_power_gbs_dbm", &ScenarioConfig::tx_power_gbs_dbm),
        real_field("tx_power_uav_dbm", &ScenarioConfig::tx_power_uav_dbm),
        real_field("bandwidth_cell_hz", &ScenarioConfig::bandwidth_cell_hz),
        real_field("bandwidth_d2d_hz", &ScenarioConfig::bandwidth_d2d_hz),
        real_field("sinr_gap_cell", &ScenarioConfig::sinr_gap_cell),
        real_field("sinr_gap_d2d", &ScenarioConfig::sinr_gap_d2d),
        real_field("noise_phase1_dbm", &ScenarioConfig::noise_phase1_dbm),
        real_field("intf_noise_phase2_dbm", &ScenarioConfig::intf_noise_phase2_dbm),
        real_field("message_bits", &ScenarioConfig::message_bits),
        real_field("tau_total_s", &ScenarioConfig::tau_total_s),
        real_field("tau_phase1_s", &ScenarioConfig::tau_phase1_s),
    };
    return table;
}

const FieldDesc& find_field(std::string_view key) {
    for (const auto& f : fields()) {
        if (f.key == key) return f;
    }
    throw ConfigError(std::string(key), "unknown config key");
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

ConfigError::ConfigError(std::string field, std::string message)
    : ConfigError(std::vector<ConfigIssue>{{std::move(field), std::move(message)}}) {}

PackingError::PackingError(int n_uavs, double swarm_radius_m, double min_separation_m)
    : ConfigError("min_separation_m",
                  "packing infeasible: n_uavs * (min_separation_m / 2)^2 = " +
                      std::to_string(n_uavs * 0.25 * min_separation_m * min_separation_m) +
                      " exceeds swarm_radius_m^2 = " +
                      std::to_string(swarm_radius_m * swarm_radius_m)) {}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }
double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

double sinr_threshold(double bits, double duration_s, double bandwidth_hz, double gap) {
    if (!(duration_s > 0.0)) throw std::domain_error("sinr_threshold: duration must be > 0");
    if (!(bandwidth_hz > 0.0)) throw std::domain_error("sinr_threshold: bandwidth must be > 0");
    if (!(gap > 0.0 && gap <= 1.0)) throw std::domain_error("sinr_threshold: gap must lie in (0, 1]");
    if (!(bits >= 0.0)) throw std::domain_error("sinr_threshold: bits must be >= 0");
    const double efficiency = bits / (duration_s * bandwidth_hz);
    if (efficiency > 1024.0) {
        throw std::domain_error("sinr_threshold: spectral efficiency above 1024 bit/s/Hz");
    }
    return std::expm1(efficiency * std::log(2.0)) / gap;
}

Scenario validate(const ScenarioConfig& c) {
    std::vector<ConfigIssue> issues;
    auto require = [&](bool ok, const char* field, const char* msg) {
        if (!ok) issues.push_back({field, msg});
    };

    for (const auto& f : fields()) {
        if (f.kind == FieldKind::Real && !std::isfinite(c.*(f.real_ptr))) {
            issues.push_back({std::string(f.key), "must be finite"});
        }
    }

    require(c.n_uavs >= 1, "n_uavs", "must be >= 1");
    require(c.m_available >= 1, "m_available", "must be >= 1");
    require(c.m_occupied >= 0, "m_occupied", "must be >= 0");
    require(c.coverage_radius_m > 0, "coverage_radius_m", "must be > 0");
    require(c.swarm_radius_m > 0, "swarm_radius_m", "must be > 0");
    require(c.swarm_altitude_m > 0, "swarm_altitude_m", "must be > 0");
    require(c.min_separation_m >= 0, "min_separation_m", "must be >= 0");
    require(c.min_separation_m < 2.0 * c.swarm_radius_m, "min_separation_m",
            "must be < 2 * swarm_radius_m");
    require(c.pathloss_exp_cell >= 2.0, "pathloss_exp_cell", "must be >= 2");
    require(c.pathloss_exp_d2d >= 2.0, "pathloss_exp_d2d", "must be >= 2");
    require(c.rician_k >= 0.0, "rician_k", "must be >= 0");
    require(c.bandwidth_cell_hz > 0, "bandwidth_cell_hz", "must be > 0");
    require(c.bandwidth_d2d_hz > 0, "bandwidth_d2d_hz", "must be > 0");
    require(c.sinr_gap_cell > 0 && c.sinr_gap_cell <= 1, "sinr_gap_cell", "must lie in (0, 1]");
    require(c.sinr_gap_d2d > 0 && c.sinr_gap_d2d <= 1, "sinr_gap_d2d", "must lie in (0, 1]");
    require(c.message_bits >= 0, "message_bits", "must be >= 0");
    require(c.tau_total_s > 0, "tau_total_s", "must be > 0");
    require(c.tau_phase1_s > 0 && c.tau_phase1_s < c.tau_total_s, "tau_phase1_s",
            "must satisfy 0 < tau_phase1_s < tau_total_s");

    Scenario s(c);
    if (issues.empty()) {
        auto threshold = [&](double duration, double bw, double gap, const char* which) {
            try {
                return sinr_threshold(c.message_bits, duration, bw, gap);
            } catch (const std::domain_error& e) {
                issues.push_back({"message_bits", std::string(which) + ": " + e.what()});
                return 0.0;
            }
        };
        s.theta_phase1_ = threshold(c.tau_phase1_s, c.bandwidth_cell_hz, c.sinr_gap_cell, "phase 1");
        s.theta_phase2_ = threshold(c.tau_phase2_s(), c.bandwidth_d2d_hz, c.sinr_gap_d2d, "phase 2");
        s.theta_cell_full_ = threshold(c.tau_total_s, c.bandwidth_cell_hz, c.sinr_gap_cell, "cellular");
        s.theta_d2d_full_ = threshold(c.tau_total_s, c.bandwidth_d2d_hz, c.sinr_gap_d2d, "d2d");
    }
    if (!issues.empty()) throw ConfigError(std::move(issues));

    const double half = 0.5 * c.min_separation_m;
    if (c.n_uavs * half * half > c.swarm_radius_m * c.swarm_radius_m) {
        throw PackingError(c.n_uavs, c.swarm_radius_m, c.min_separation_m);
    }

    s.tx_power_gbs_w_ = dbm_to_watts(c.tx_power_gbs_dbm);
    s.tx_power_uav_w_ = dbm_to_watts(c.tx_power_uav_dbm);
    s.ref_gain_cell_ = db_to_linear(c.ref_gain_cell_db);
    s.ref_gain_d2d_ = db_to_linear(c.ref_gain_d2d_db);
    s.noise_phase1_w_ = dbm_to_watts(c.noise_phase1_dbm);
    s.intf_noise_phase2_w_ = dbm_to_watts(c.intf_noise_phase2_dbm);
    return s;
}

const std::vector<std::string_view>& config_keys() {
    static const std::vector<std::string_view> keys = [] {
        std::vector<std::string_view> k;
        for (const auto& f : fields()) k.push_back(f.key);
        return k;
    }();
    return keys;
}

void set_config_value(ScenarioConfig& config, std::string_view key, std::string_view value) {
    const FieldDesc& f = find_field(key);
    const char* first = value.data();
    const char* last = value.data() + value.size();
    if (f.kind == FieldKind::Int) {
        int v = 0;
        auto [p, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || p != last) {
            throw ConfigError(std::string(key), "expected an integer, got '" + std::string(value) + "'");
        }
        config.*(f.int_ptr) = v;
    } else {
        double v = 0;
        auto [p, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || p != last) {
            throw ConfigError(std::string(key), "expected a number, got '" + std::string(value) + "'");
        }
        config.*(f.real_ptr) = v;
    }
}

double get_config_value(const ScenarioConfig& config, std::string_view key) {
    const FieldDesc& f = find_field(key);
    return f.kind == FieldKind::Int ? static_cast<double>(config.*(f.int_ptr)) : config.*(f.real_ptr);
}

std::string config_to_json(const ScenarioConfig& config) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& f : fields()) {
        if (f.kind == FieldKind::Int) {
            j[std::string(f.key)] = config.*(f.int_ptr);
        } else {
            j[std::string(f.key)] = config.*(f.real_ptr);
        }
    }
    return j.dump(2);
}

ScenarioConfig config_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("<document>", std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("<document>", "top level must be an object");

    ScenarioConfig c;
    std::vector<ConfigIssue> issues;
    for (const auto& [key, value] : j.items()) {
        const FieldDesc* f = nullptr;
        for (const auto& candidate : fields()) {
            if (candidate.key == key) f = &candidate;
        }
        if (f == nullptr) {
            issues.push_back({key, "unknown config key"});
            continue;
        }
        if (!value.is_number()) {
            issues.push_back({key, "must be a number"});
            continue;
        }
        if (f->kind == FieldKind::Int) {
            if (!value.is_number_integer()) {
                issues.push_back({key, "must be an integer"});
                continue;
            }
            c.*(f->int_ptr) = value.get<int>();
        } else {
            c.*(f->real_ptr) = value.get<double>();
        }
    }
    if (!issues.empty()) throw ConfigError(std::move(issues));
    return c;
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", "cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return config_from_json(buf.str());
}

}  // namespace uavswarm

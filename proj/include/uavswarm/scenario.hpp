#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace uavswarm {

/// Raw scenario parameters as read from a config file or built in code.
/// Units are carried by the field suffix; powers and gains are in dB/dBm
/// here and are converted exactly once by validate().
struct ScenarioConfig {
    int n_uavs = 40;
    int m_available = 8;
    int m_occupied = 8;

    double coverage_radius_m = 900.0;
    double swarm_radius_m = 30.0;
    double swarm_altitude_m = 300.0;
    double min_separation_m = 5.0;

    double pathloss_exp_cell = 2.0;
    double pathloss_exp_d2d = 2.0;
    double rician_k = 4.0;

    double ref_gain_cell_db = -40.0;
    double ref_gain_d2d_db = -40.0;
    double tx_power_gbs_dbm = 43.0;
    double tx_power_uav_dbm = 23.0;

    double bandwidth_cell_hz = 200e3;
    double bandwidth_d2d_hz = 200e3;
    double sinr_gap_cell = 5.0 / 6.0;
    double sinr_gap_d2d = 5.0 / 6.0;

    // Phase-I AWGN is not part of the closed-form model; the simulator keeps
    // it but it sits far below the occupied-GBS interference.
    double noise_phase1_dbm = -100.0;
    double intf_noise_phase2_dbm = -40.0;

    double message_bits = 40.0;
    double tau_total_s = 1e-3;
    double tau_phase1_s = 0.5e-3;

    double tau_phase2_s() const { return tau_total_s - tau_phase1_s; }
};

/// One violated invariant.
struct ConfigIssue {
    std::string field;
    std::string message;
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<ConfigIssue> issues);
    ConfigError(std::string field, std::string message);

    const std::vector<ConfigIssue>& issues() const { return issues_; }

private:
    std::vector<ConfigIssue> issues_;
};

/// The swarm cannot hold n_uavs discs of diameter min_separation_m.
class PackingError : public ConfigError {
public:
    PackingError(int n_uavs, double swarm_radius_m, double min_separation_m);
};

double db_to_linear(double db);
double linear_to_db(double linear);
double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

/// Minimum SINR that carries `bits` in `duration_s` over `bandwidth_hz` with
/// modulation gap `gap`: (2^(bits / (duration * bandwidth)) - 1) / gap.
/// Throws std::domain_error on bad inputs or when the spectral efficiency
/// exceeds 1024 bit/s/Hz.
double sinr_threshold(double bits, double duration_s, double bandwidth_hz, double gap);

/// Validated, immutable scenario with every radio quantity in linear units.
/// Only validate() creates one, so holding a Scenario means the invariants hold.
class Scenario {
public:
    const ScenarioConfig& config() const { return cfg_; }

    int n_uavs() const { return cfg_.n_uavs; }
    int m_available() const { return cfg_.m_available; }
    int m_occupied() const { return cfg_.m_occupied; }

    double tx_power_gbs_w() const { return tx_power_gbs_w_; }
    double tx_power_uav_w() const { return tx_power_uav_w_; }
    double ref_gain_cell() const { return ref_gain_cell_; }
    double ref_gain_d2d() const { return ref_gain_d2d_; }
    double noise_phase1_w() const { return noise_phase1_w_; }
    double intf_noise_phase2_w() const { return intf_noise_phase2_w_; }

    /// Thresholds of the two-phase protocol (phase durations tau1 / tau - tau1).
    double theta_phase1() const { return theta_phase1_; }
    double theta_phase2() const { return theta_phase2_; }
    /// Thresholds when a single stage occupies the whole budget tau.
    double theta_cell_full() const { return theta_cell_full_; }
    double theta_d2d_full() const { return theta_d2d_full_; }

    /// P~ * beta~ / sigma~^2: D2D receive SNR scale at unit distance and unit fading.
    double d2d_snr_scale() const { return tx_power_uav_w_ * ref_gain_d2d_ / intf_noise_phase2_w_; }

    /// Copy of the config with one change applied, revalidated.
    template <class Fn>
    Scenario with(Fn&& edit) const;

private:
    friend Scenario validate(const ScenarioConfig& config);
    explicit Scenario(const ScenarioConfig& cfg) : cfg_(cfg) {}

    ScenarioConfig cfg_;
    double tx_power_gbs_w_ = 0;
    double tx_power_uav_w_ = 0;
    double ref_gain_cell_ = 0;
    double ref_gain_d2d_ = 0;
    double noise_phase1_w_ = 0;
    double intf_noise_phase2_w_ = 0;
    double theta_phase1_ = 0;
    double theta_phase2_ = 0;
    double theta_cell_full_ = 0;
    double theta_d2d_full_ = 0;
};

/// Checks every invariant and fills the linear-unit cache. All field
/// violations are collected into one ConfigError; an infeasible packing is
/// reported separately as PackingError once the fields themselves are valid.
Scenario validate(const ScenarioConfig& config);

template <class Fn>
Scenario Scenario::with(Fn&& edit) const {
    ScenarioConfig c = cfg_;
    edit(c);
    return validate(c);
}

// ---- flat key/value I/O --------------------------------------------------

/// Names of every config key, in declaration order.
const std::vector<std::string_view>& config_keys();

/// Sets one field from its textual value. Unknown keys and unparsable values
/// throw ConfigError.
void set_config_value(ScenarioConfig& config, std::string_view key, std::string_view value);

/// Reads one field as a double (integer fields are widened).
double get_config_value(const ScenarioConfig& config, std::string_view key);

/// Flat JSON object, one key per field. Doubles are written in shortest
/// round-trip form so a write/read cycle is bit-exact.
std::string config_to_json(const ScenarioConfig& config);
ScenarioConfig config_from_json(std::string_view text);
ScenarioConfig load_config_file(const std::string& path);

}  // namespace uavswarm

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "uavswarm/scenario.hpp"

using namespace uavswarm;
using doctest::Approx;

namespace {

bool has_issue(const ConfigError& e, const std::string& field) {
    for (const auto& i : e.issues()) {
        if (i.field == field) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("default config validates and caches linear units") {
    const Scenario s = validate(ScenarioConfig{});
    CHECK(s.n_uavs() == 40);
    CHECK(s.tx_power_gbs_w() == Approx(std::pow(10.0, 1.3)).epsilon(1e-14));
    CHECK(s.tx_power_uav_w() == Approx(0.19953).epsilon(1e-5));
    CHECK(s.ref_gain_cell() == Approx(1e-4).epsilon(1e-14));
    CHECK(s.intf_noise_phase2_w() == Approx(1e-7).epsilon(1e-14));
    CHECK(s.noise_phase1_w() == Approx(1e-13).epsilon(1e-14));
    CHECK(s.theta_phase1() == Approx(0.38341).epsilon(1e-5));
    CHECK(s.theta_phase1() == Approx((std::pow(2.0, 0.4) - 1.0) * 1.2).epsilon(1e-13));
    CHECK(s.theta_phase2() == s.theta_phase1());
    CHECK(s.config().tau_phase1_s + s.config().tau_phase2_s() == s.config().tau_total_s);
}

TEST_CASE("threshold arithmetic") {
    CHECK(sinr_threshold(0.0, 0.5e-3, 200e3, 5.0 / 6.0) == 0.0);
    CHECK(sinr_threshold(40.0, 0.5e-3, 200e3, 5.0 / 6.0) == Approx(0.38341).epsilon(1e-5));
    CHECK(sinr_threshold(4.0, 0.5e-3, 200e3, 5.0 / 6.0) == Approx(0.033737).epsilon(1e-5));
    double prev = -1.0;
    for (double d = 0.0; d <= 200.0; d += 10.0) {
        const double t = sinr_threshold(d, 0.5e-3, 200e3, 1.0);
        CHECK(t > prev);
        prev = t;
    }
    CHECK(sinr_threshold(40.0, 0.2e-3, 200e3, 1.0) > sinr_threshold(40.0, 0.4e-3, 200e3, 1.0));
    CHECK_THROWS_AS(sinr_threshold(1e9, 0.5e-3, 200e3, 1.0), std::domain_error);
    CHECK_THROWS_AS(sinr_threshold(1.0, 0.0, 200e3, 1.0), std::domain_error);
    CHECK_THROWS_AS(sinr_threshold(1.0, 1e-3, 200e3, 1.5), std::domain_error);
}

TEST_CASE("unit conversions") {
    CHECK(dbm_to_watts(0.0) == Approx(1e-3).epsilon(1e-15));
    CHECK(dbm_to_watts(23.0) == Approx(0.19953).epsilon(1e-5));
    CHECK(db_to_linear(-40.0) == Approx(1e-4).epsilon(1e-15));
    for (double x : {-123.4, -40.0, 0.0, 3.0, 43.0}) {
        CHECK(std::abs(linear_to_db(db_to_linear(x)) - x) <= 1e-12 * std::max(1.0, std::abs(x)));
        CHECK(std::abs(watts_to_dbm(dbm_to_watts(x)) - x) <= 1e-12 * std::max(1.0, std::abs(x)));
    }
}

TEST_CASE("invariant violations name their fields") {
    ScenarioConfig c;
    c.tau_phase1_s = c.tau_total_s;
    try {
        validate(c);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(has_issue(e, "tau_phase1_s"));
    }

    ScenarioConfig bad;
    bad.n_uavs = 0;
    bad.m_available = 0;
    bad.swarm_altitude_m = -1.0;
    bad.sinr_gap_d2d = 0.0;
    bad.rician_k = std::nan("");
    try {
        validate(bad);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(has_issue(e, "n_uavs"));
        CHECK(has_issue(e, "m_available"));
        CHECK(has_issue(e, "swarm_altitude_m"));
        CHECK(has_issue(e, "sinr_gap_d2d"));
        CHECK(has_issue(e, "rician_k"));
    }

    ScenarioConfig huge;
    huge.message_bits = 1e9;
    CHECK_THROWS_AS(validate(huge), ConfigError);
}

TEST_CASE("packing infeasibility is its own error") {
    ScenarioConfig c;
    c.n_uavs = 1000;
    CHECK_THROWS_AS(validate(c), PackingError);
    c.n_uavs = 144;  // 144 * 6.25 = 900: exactly at the bound
    CHECK_NOTHROW(validate(c));
}

TEST_CASE("Scenario::with revalidates") {
    const Scenario s = validate(ScenarioConfig{});
    const Scenario t = s.with([](ScenarioConfig& c) { c.message_bits = 4.0; });
    CHECK(t.theta_phase1() == Approx(0.033737).epsilon(1e-5));
    CHECK_THROWS_AS(s.with([](ScenarioConfig& c) { c.n_uavs = -3; }), ConfigError);
}

TEST_CASE("key/value config round trip is bit exact") {
    ScenarioConfig c;
    c.coverage_radius_m = 0.1 + 0.2;
    c.tau_phase1_s = 0.55e-3;
    c.m_occupied = 2;
    const ScenarioConfig back = config_from_json(config_to_json(c));
    for (auto key : config_keys()) CHECK(get_config_value(back, key) == get_config_value(c, key));

    set_config_value(c, "message_bits", "16");
    CHECK(c.message_bits == 16.0);
    set_config_value(c, "n_uavs", "30");
    CHECK(c.n_uavs == 30);
    CHECK_THROWS_AS(set_config_value(c, "n_uavs", "3.5"), ConfigError);
    CHECK_THROWS_AS(set_config_value(c, "no_such_key", "1"), ConfigError);
    CHECK_THROWS_AS(set_config_value(c, "swarm_radius_m", "abc"), ConfigError);

    CHECK_THROWS_AS(config_from_json(R"({"bogus": 1})"), ConfigError);
    CHECK_THROWS_AS(config_from_json(R"({"n_uavs": "forty"})"), ConfigError);
    CHECK_THROWS_AS(config_from_json(R"({"n_uavs": 2.5})"), ConfigError);
    const ScenarioConfig partial = config_from_json(R"({"n_uavs": 10})");
    CHECK(partial.n_uavs == 10);
    CHECK(partial.m_available == 8);
}

TEST_CASE("config file loading") {
    const std::string path = "scenario_test_config.json";
    {
        std::ofstream f(path);
        f << R"({"swarm_radius_m": 20, "message_bits": 8})";
    }
    const ScenarioConfig c = load_config_file(path);
    CHECK(c.swarm_radius_m == 20.0);
    CHECK(c.message_bits == 8.0);
    std::remove(path.c_str());
    CHECK_THROWS(load_config_file("definitely/missing/file.json"));
}

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "uavswarm/analytic.hpp"
#include "uavswarm/mc.hpp"

using namespace uavswarm;
using doctest::Approx;

namespace {

Scenario table1(int m0 = 8, int m1 = 8, double bits = 40.0) {
    ScenarioConfig c;
    c.m_available = m0;
    c.m_occupied = m1;
    c.message_bits = bits;
    return validate(c);
}

bool disjoint(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> both;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
    return both.empty();
}

double combined_se(const ReliabilityEstimate& a, const ReliabilityEstimate& b) {
    return std::hypot(a.std_err.value_or(0.0), b.std_err.value_or(0.0));
}

}  // namespace

TEST_CASE("protocol names and parsing") {
    CHECK(parse_protocol("proposed").type == ProtocolType::Proposed);
    CHECK(parse_protocol("p1").type == ProtocolType::NearestGbsOnly);
    CHECK(parse_protocol("protocol-2").type == ProtocolType::AllGbsNoD2d);
    CHECK(parse_protocol("iii").type == ProtocolType::HeadOnlyRelay);
    const ProtocolKind m = parse_protocol("multi-round", 4, false);
    CHECK(m.rounds == 4);
    CHECK_FALSE(m.with_head);
    CHECK(m.name() == "multi-round-4-nohead");
    CHECK_THROWS_AS(parse_protocol("bogus"), std::invalid_argument);
    CHECK_THROWS_AS(ProtocolKind::multi_round(0, true), std::invalid_argument);
}

TEST_CASE("zero-length message: everybody decodes in phase I") {
    const Scenario s = table1(8, 8, 0.0);
    for (const ProtocolKind& p : {ProtocolKind::proposed(), ProtocolKind::nearest_gbs_only(),
                                  ProtocolKind::all_gbs_no_d2d(), ProtocolKind::head_only_relay(),
                                  ProtocolKind::multi_round(3, false)}) {
        Rng rng(1);
        const TrialOutcome o = run_trial(s, p, rng);
        CHECK(o.decoded_phase1.size() == 40);
        CHECK(o.decoded_phase2.empty());
        CHECK(o.decoded_fraction() == 1.0);
    }
}

TEST_CASE("trial invariants") {
    const Scenario s = table1(8, 8, 60.0);
    for (std::uint64_t i = 0; i < 300; ++i) {
        for (const ProtocolKind& p :
             {ProtocolKind::proposed(), ProtocolKind::head_only_relay(), ProtocolKind::multi_round(4, true)}) {
            Rng rng = Rng::for_trial(5, i);
            const TrialOutcome o = run_trial(s, p, rng);
            CHECK(o.min_pair_distance >= 5.0);
            CHECK(std::is_sorted(o.decoded_phase1.begin(), o.decoded_phase1.end()));
            CHECK(std::is_sorted(o.decoded_phase2.begin(), o.decoded_phase2.end()));
            CHECK(disjoint(o.decoded_phase1, o.decoded_phase2));
            CHECK(o.decoded_total() <= 40);
            if (p.type == ProtocolType::HeadOnlyRelay &&
                !std::binary_search(o.decoded_phase1.begin(), o.decoded_phase1.end(), 0)) {
                CHECK(o.decoded_phase2.empty());
            }
            const std::vector<int>* prev = &o.decoded_phase1;
            for (const auto& set : o.round_sets) {
                CHECK(std::includes(set.begin(), set.end(), prev->begin(), prev->end()));
                prev = &set;
            }
        }
    }
}

TEST_CASE("estimates are deterministic and independent of the worker count") {
    const Scenario s = table1();
    const ReliabilityEstimate a = estimate(s, ProtocolKind::proposed(), 600, 42, 1);
    const ReliabilityEstimate b = estimate(s, ProtocolKind::proposed(), 600, 42, 1);
    const ReliabilityEstimate c = estimate(s, ProtocolKind::proposed(), 600, 42, 7);
    CHECK(a.eta_mean == b.eta_mean);
    CHECK(a.eta_mean == c.eta_mean);
    CHECK(*a.std_err == *c.std_err);
    CHECK(a.seed == 42);
    CHECK(a.trials == 600);
    const ReliabilityEstimate other = estimate(s, ProtocolKind::proposed(), 600, 43, 1);
    CHECK(other.eta_mean != a.eta_mean);

    const ReliabilityEstimate single = estimate(s, ProtocolKind::proposed(), 1, 42, 1);
    CHECK_FALSE(single.std_err.has_value());
    CHECK_THROWS_AS(estimate(s, ProtocolKind::proposed(), 0, 42, 1), std::invalid_argument);
}

TEST_CASE("standard error shrinks like 1/sqrt(trials)") {
    const Scenario s = table1(8, 8, 60.0);
    double ratio_sum = 0.0;
    const int repeats = 5;
    for (int r = 0; r < repeats; ++r) {
        const ReliabilityEstimate a = estimate(s, ProtocolKind::all_gbs_no_d2d(), 1000, 100 + r);
        const ReliabilityEstimate b = estimate(s, ProtocolKind::all_gbs_no_d2d(), 2000, 200 + r);
        ratio_sum += *b.std_err / *a.std_err;
    }
    CHECK(std::abs(ratio_sum / repeats - 1.0 / std::sqrt(2.0)) < 0.2 / std::sqrt(2.0));
}

TEST_CASE("parallel_for reports exceptions") {
    CHECK_THROWS_AS(parallel_for(100, 4,
                                 [](std::size_t i) {
                                     if (i == 37) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
    std::vector<int> hit(1000, 0);
    parallel_for(hit.size(), 3, [&](std::size_t i) { hit[i] += 1; });
    CHECK(std::all_of(hit.begin(), hit.end(), [](int h) { return h == 1; }));
}

TEST_CASE("phase-I count distribution") {
    const std::vector<double> all = phase1_count_distribution(table1(8, 8, 0.0), 50, 3);
    CHECK(all.size() == 41);
    CHECK(all[40] == 1.0);

    const Scenario s = table1();
    const MonteCarloRun run = run_trials(s, ProtocolKind::proposed(), 4000, 9);
    const std::vector<double> pmf = run.phase1_histogram();
    CHECK(std::accumulate(pmf.begin(), pmf.end(), 0.0) == Approx(1.0).epsilon(1e-12));
    const ReliabilityEstimate count = run.phase1_count();
    double mean = 0.0;
    for (std::size_t k = 0; k < pmf.size(); ++k) mean += k * pmf[k];
    CHECK(mean == Approx(count.eta_mean).epsilon(1e-12));
}

TEST_CASE("analytic phase-I count within 2% of simulation") {
    const Scenario s = table1();
    const MonteCarloRun run = run_trials(s, ProtocolKind::proposed(), 20000, 2024);
    CHECK(std::abs(phase1_expected(s) - run.phase1_count().eta_mean) <= 0.02 * run.phase1_count().eta_mean);
    CHECK(std::abs(reliability(s).eta - run.eta().eta_mean) <= 0.02);
}

TEST_CASE("protocol ordering at 40 bits: proposed beats protocol III") {
    const Scenario s = table1();
    const auto prop = estimate(s, ProtocolKind::proposed(), 20000, 77);
    const auto p3 = estimate(s, ProtocolKind::head_only_relay(), 20000, 77);
    CHECK(prop.eta_mean - p3.eta_mean > 3.0 * combined_se(prop, p3));
}

// Registered as its own ctest entry. With Table I radio parameters a lone head relay
// at theta^(II) recovers fewer UAVs than protocol II gains by keeping the full tau for
// the cellular phase, so this ordering does not hold for the model as configured.
TEST_CASE("protocol ordering at 40 bits: protocol III beats protocol II") {
    const Scenario s = table1();
    const auto p3 = estimate(s, ProtocolKind::head_only_relay(), 20000, 77);
    const auto p2 = estimate(s, ProtocolKind::all_gbs_no_d2d(), 20000, 77);
    CHECK(p3.eta_mean - p2.eta_mean > 3.0 * combined_se(p3, p2));
}

TEST_CASE("multi-round reliability is non-decreasing in rounds for every seed") {
    ScenarioConfig c;
    c.n_uavs = 10;
    c.message_bits = 150.0;
    const Scenario s = validate(c);
    for (bool head : {true, false}) {
        const MonteCarloRun run = run_trials(s, ProtocolKind::multi_round(6, head), 300, 12);
        for (const auto& t : run.trials) {
            REQUIRE(t.round_totals.size() == 6);
            CHECK(t.round_totals.front() >= t.phase1);
            CHECK(std::is_sorted(t.round_totals.begin(), t.round_totals.end()));
        }
        const auto etas = run.round_etas();
        for (std::size_t r = 1; r < etas.size(); ++r) CHECK(etas[r].eta_mean >= etas[r - 1].eta_mean);
    }
}

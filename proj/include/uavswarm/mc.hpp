#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uavswarm/rng.hpp"
#include "uavswarm/scenario.hpp"

namespace uavswarm {

enum class ProtocolType {
    Proposed,        // cellular phase then D2D relaying by every phase-I decoder
    NearestGbsOnly,  // Protocol I: nearest available GBS, whole budget, no D2D
    AllGbsNoD2d,     // Protocol II: all available GBSs, whole budget, no D2D
    HeadOnlyRelay,   // Protocol III: only the swarm head relays
    MultiRound,      // cellular stage then repeated D2D rounds, each of length tau
};

struct ProtocolKind {
    ProtocolType type = ProtocolType::Proposed;
    int rounds = 1;          // MultiRound only
    bool with_head = true;   // MultiRound only: head-aligned cellular weights

    static ProtocolKind proposed() { return {}; }
    static ProtocolKind nearest_gbs_only() { return {ProtocolType::NearestGbsOnly}; }
    static ProtocolKind all_gbs_no_d2d() { return {ProtocolType::AllGbsNoD2d}; }
    static ProtocolKind head_only_relay() { return {ProtocolType::HeadOnlyRelay}; }
    /// Throws std::invalid_argument for rounds < 1.
    static ProtocolKind multi_round(int rounds, bool with_head);

    /// "proposed", "protocol-1", ..., "multi-round-3-head" / "multi-round-3-nohead".
    std::string name() const;
};

/// Accepts proposed | protocol-1 | protocol-2 | protocol-3 | multi-round (also
/// p1/p2/p3/i/ii/iii). rounds/with_head fill in MultiRound.
ProtocolKind parse_protocol(std::string_view text, int rounds = 1, bool with_head = true);

struct TrialOutcome {
    ProtocolKind protocol;
    std::size_t n_uavs = 0;
    std::vector<int> decoded_phase1;
    /// Decoded after the D2D stage but not in phase I (empty without D2D).
    std::vector<int> decoded_phase2;
    /// MultiRound: cumulative decode set after each round (nested).
    std::vector<std::vector<int>> round_sets;
    double min_pair_distance = 0.0;

    std::size_t decoded_total() const { return decoded_phase1.size() + decoded_phase2.size(); }
    double decoded_fraction() const { return static_cast<double>(decoded_total()) / n_uavs; }
};

/// One snapshot: layouts, fading, and the protocol's decode tests.
TrialOutcome run_trial(const Scenario& scenario, const ProtocolKind& protocol, Rng& rng);

struct ReliabilityEstimate {
    double eta_mean = 0.0;
    /// Sample standard deviation / sqrt(trials); absent for a single trial.
    std::optional<double> std_err;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
};

/// Mean and standard error of per-trial values summed in index order.
ReliabilityEstimate summarize(const std::vector<double>& values, std::uint64_t seed);

/// Compact per-trial record kept by batch runs.
struct TrialSummary {
    int phase1 = 0;
    int total = 0;
    std::vector<int> round_totals;  // MultiRound only
};

struct MonteCarloRun {
    std::size_t n_uavs = 0;
    std::uint64_t seed = 0;
    std::vector<TrialSummary> trials;

    ReliabilityEstimate eta() const;
    /// Fraction decoded in the cellular stage alone.
    ReliabilityEstimate phase1_eta() const;
    /// MultiRound: reliability after rounds 1..R.
    std::vector<ReliabilityEstimate> round_etas() const;
    /// Empirical mass function of |Theta^(I)| over 0..N.
    std::vector<double> phase1_histogram() const;
    ReliabilityEstimate phase1_count() const;
};

/// 0 means one worker per hardware thread.
unsigned resolve_workers(unsigned workers);

/// Calls body(i) for i in [0, count) on `workers` threads. The first exception
/// thrown by any call is rethrown after all workers stop.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body);

/// Trial i uses Rng::for_trial(seed, i), so results do not depend on `workers`.
MonteCarloRun run_trials(const Scenario& scenario, const ProtocolKind& protocol, std::size_t trials,
                         std::uint64_t seed, unsigned workers = 0);

/// Mean decoded fraction. Throws std::invalid_argument for trials == 0.
ReliabilityEstimate estimate(const Scenario& scenario, const ProtocolKind& protocol, std::size_t trials,
                             std::uint64_t seed, unsigned workers = 0);

/// Mass function of the phase-I decode count (proposed protocol's cellular stage).
std::vector<double> phase1_count_distribution(const Scenario& scenario, std::size_t trials,
                                              std::uint64_t seed, unsigned workers = 0);

}  // namespace uavswarm

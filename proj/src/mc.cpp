#include "uavswarm/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "uavswarm/fading.hpp"
#include "uavswarm/geometry.hpp"

namespace uavswarm {

ProtocolKind ProtocolKind::multi_round(int rounds, bool with_head) {
    if (rounds < 1) throw std::invalid_argument("multi-round protocol needs rounds >= 1");
    return {ProtocolType::MultiRound, rounds, with_head};
}

std::string ProtocolKind::name() const {
    switch (type) {
        case ProtocolType::Proposed: return "proposed";
        case ProtocolType::NearestGbsOnly: return "protocol-1";
        case ProtocolType::AllGbsNoD2d: return "protocol-2";
        case ProtocolType::HeadOnlyRelay: return "protocol-3";
        case ProtocolType::MultiRound:
            return "multi-round-" + std::to_string(rounds) + (with_head ? "-head" : "-nohead");
    }
    return "unknown";
}

ProtocolKind parse_protocol(std::string_view text, int rounds, bool with_head) {
    if (text == "proposed") return ProtocolKind::proposed();
    if (text == "protocol-1" || text == "p1" || text == "i") return ProtocolKind::nearest_gbs_only();
    if (text == "protocol-2" || text == "p2" || text == "ii") return ProtocolKind::all_gbs_no_d2d();
    if (text == "protocol-3" || text == "p3" || text == "iii") return ProtocolKind::head_only_relay();
    if (text == "multi-round" || text == "multi") return ProtocolKind::multi_round(rounds, with_head);
    throw std::invalid_argument("unknown protocol '" + std::string(text) + "'");
}

namespace {

std::vector<int> passing(const std::vector<double>& sinr, double theta, std::span<const int> ids = {}) {
    std::vector<int> out;
    for (std::size_t i = 0; i < sinr.size(); ++i) {
        if (sinr[i] >= theta) out.push_back(ids.empty() ? static_cast<int>(i) : ids[i]);
    }
    return out;
}

// One D2D transmission from `decoders` to everybody else; returns the new decoders.
std::vector<int> relay_stage(const SwarmLayout& swarm, std::span<const int> decoders, double theta,
                             const Scenario& s, Rng& rng) {
    if (decoders.empty()) return {};
    const std::vector<int> receivers = complement_of(decoders, swarm.size());
    if (receivers.empty()) return {};
    const ChannelDrawPhase2 draw = sample_phase2_draw(receivers.size(), decoders.size(), rng);
    return passing(phase2_sinrs(swarm, decoders, draw, s), theta, receivers);
}

std::vector<int> merged(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace

TrialOutcome run_trial(const Scenario& s, const ProtocolKind& protocol, Rng& rng) {
    const auto& c = s.config();
    TrialOutcome out;
    out.protocol = protocol;
    out.n_uavs = static_cast<std::size_t>(c.n_uavs);

    const GbsLayout gbs = sample_gbs_layout(s, rng);
    const SwarmLayout swarm = sample_swarm_layout(s, rng);
    if (swarm.size() > 1) {
        out.min_pair_distance = swarm.min_pair_distance();
        if (out.min_pair_distance < c.min_separation_m) {
            throw std::logic_error("swarm layout violates the minimum separation");
        }
    }
    const ChannelDrawPhase1 draw = sample_phase1_draw(swarm.size(), gbs.size(), c.rician_k, rng);

    switch (protocol.type) {
        case ProtocolType::Proposed: {
            out.decoded_phase1 = passing(phase1_sinrs(gbs, swarm, draw, s), s.theta_phase1());
            out.decoded_phase2 = relay_stage(swarm, out.decoded_phase1, s.theta_phase2(), s, rng);
            break;
        }
        case ProtocolType::NearestGbsOnly: {
            Phase1Transmission tx;
            tx.weighting = Phase1Weighting::Unit;
            const auto nearest = std::min_element(
                gbs.available_idx.begin(), gbs.available_idx.end(),
                [&](int a, int b) { return gbs.center_distances[a] < gbs.center_distances[b]; });
            tx.transmitters = {*nearest};
            out.decoded_phase1 = passing(phase1_sinrs(gbs, swarm, draw, s, tx), s.theta_cell_full());
            break;
        }
        case ProtocolType::AllGbsNoD2d: {
            out.decoded_phase1 = passing(phase1_sinrs(gbs, swarm, draw, s), s.theta_cell_full());
            break;
        }
        case ProtocolType::HeadOnlyRelay: {
            out.decoded_phase1 = passing(phase1_sinrs(gbs, swarm, draw, s), s.theta_phase1());
            const bool head_ok = std::binary_search(out.decoded_phase1.begin(), out.decoded_phase1.end(),
                                                    swarm.head_idx);
            if (head_ok) {
                const int head[] = {swarm.head_idx};
                const auto receivers = complement_of(head, swarm.size());
                // only the head transmits; everyone else who missed phase I listens
                std::vector<int> listeners;
                std::set_difference(receivers.begin(), receivers.end(), out.decoded_phase1.begin(),
                                    out.decoded_phase1.end(), std::back_inserter(listeners));
                if (!listeners.empty()) {
                    const ChannelDrawPhase2 d2 = sample_phase2_draw(receivers.size(), 1, rng);
                    const auto sinr = phase2_sinrs(swarm, head, d2, s);
                    for (std::size_t r = 0; r < receivers.size(); ++r) {
                        if (sinr[r] >= s.theta_phase2() &&
                            std::binary_search(listeners.begin(), listeners.end(), receivers[r])) {
                            out.decoded_phase2.push_back(receivers[r]);
                        }
                    }
                }
            }
            break;
        }
        case ProtocolType::MultiRound: {
            Phase1Transmission tx;
            tx.weighting = protocol.with_head ? Phase1Weighting::HeadEqualGain : Phase1Weighting::Unit;
            out.decoded_phase1 = passing(phase1_sinrs(gbs, swarm, draw, s, tx), s.theta_cell_full());
            std::vector<int> current = out.decoded_phase1;
            for (int r = 0; r < protocol.rounds; ++r) {
                current = merged(current, relay_stage(swarm, current, s.theta_d2d_full(), s, rng));
                out.round_sets.push_back(current);
            }
            std::set_difference(current.begin(), current.end(), out.decoded_phase1.begin(),
                                out.decoded_phase1.end(), std::back_inserter(out.decoded_phase2));
            break;
        }
    }
    return out;
}

ReliabilityEstimate summarize(const std::vector<double>& values, std::uint64_t seed) {
    if (values.empty()) throw std::invalid_argument("summarize: no trials");
    ReliabilityEstimate e;
    e.trials = values.size();
    e.seed = seed;
    double sum = 0.0;
    for (double v : values) sum += v;
    e.eta_mean = sum / values.size();
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - e.eta_mean) * (v - e.eta_mean);
        e.std_err = std::sqrt(ss / (values.size() - 1) / values.size());
    }
    return e;
}

namespace {

template <class F>
ReliabilityEstimate summarize_by(const MonteCarloRun& run, F&& value) {
    std::vector<double> v;
    v.reserve(run.trials.size());
    for (const auto& t : run.trials) v.push_back(value(t));
    return summarize(v, run.seed);
}

}  // namespace

ReliabilityEstimate MonteCarloRun::eta() const {
    return summarize_by(*this, [&](const TrialSummary& t) { return static_cast<double>(t.total) / n_uavs; });
}

ReliabilityEstimate MonteCarloRun::phase1_eta() const {
    return summarize_by(*this, [&](const TrialSummary& t) { return static_cast<double>(t.phase1) / n_uavs; });
}

ReliabilityEstimate MonteCarloRun::phase1_count() const {
    return summarize_by(*this, [](const TrialSummary& t) { return static_cast<double>(t.phase1); });
}

std::vector<ReliabilityEstimate> MonteCarloRun::round_etas() const {
    std::vector<ReliabilityEstimate> out;
    if (trials.empty()) return out;
    const std::size_t rounds = trials.front().round_totals.size();
    for (std::size_t r = 0; r < rounds; ++r) {
        out.push_back(summarize_by(
            *this, [&](const TrialSummary& t) { return static_cast<double>(t.round_totals[r]) / n_uavs; }));
    }
    return out;
}

std::vector<double> MonteCarloRun::phase1_histogram() const {
    std::vector<double> pmf(n_uavs + 1, 0.0);
    for (const auto& t : trials) pmf[t.phase1] += 1.0;
    for (double& p : pmf) p /= static_cast<double>(trials.size());
    return pmf;
}

unsigned resolve_workers(unsigned workers) {
    if (workers > 0) return workers;
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body) {
    workers = std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(count, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto work = [&] {
        for (;;) {
            if (failed.load(std::memory_order_relaxed)) return;
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed = true;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

MonteCarloRun run_trials(const Scenario& scenario, const ProtocolKind& protocol, std::size_t trials,
                         std::uint64_t seed, unsigned workers) {
    if (trials == 0) throw std::invalid_argument("Monte Carlo run needs at least one trial");
    MonteCarloRun run;
    run.n_uavs = static_cast<std::size_t>(scenario.n_uavs());
    run.seed = seed;
    run.trials.resize(trials);
    parallel_for(trials, workers, [&](std::size_t i) {
        Rng rng = Rng::for_trial(seed, i);
        const TrialOutcome o = run_trial(scenario, protocol, rng);
        TrialSummary& t = run.trials[i];
        t.phase1 = static_cast<int>(o.decoded_phase1.size());
        t.total = static_cast<int>(o.decoded_total());
        for (const auto& set : o.round_sets) t.round_totals.push_back(static_cast<int>(set.size()));
    });
    return run;
}

ReliabilityEstimate estimate(const Scenario& scenario, const ProtocolKind& protocol, std::size_t trials,
                             std::uint64_t seed, unsigned workers) {
    return run_trials(scenario, protocol, trials, seed, workers).eta();
}

std::vector<double> phase1_count_distribution(const Scenario& scenario, std::size_t trials, std::uint64_t seed,
                                              unsigned workers) {
    return run_trials(scenario, ProtocolKind::proposed(), trials, seed, workers).phase1_histogram();
}

}  // namespace uavswarm

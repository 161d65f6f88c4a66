#include "uavswarm/fading.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "uavswarm/specfun.hpp"

namespace uavswarm {

cplx sample_rayleigh(Rng& rng) {
    const double re = rng.normal();
    const double im = rng.normal();
    return cplx(re, im) * std::numbers::sqrt2 * 0.5;
}

cplx sample_rician(double kappa, Rng& rng) {
    if (!(kappa >= 0.0)) throw std::domain_error("sample_rician: kappa must be >= 0");
    const double k = std::min(kappa, kRicianKappaCap);
    const double phi = 2.0 * std::numbers::pi * rng.uniform();
    const cplx los = std::polar(std::sqrt(k / (k + 1.0)), phi);
    return los + std::sqrt(1.0 / (k + 1.0)) * sample_rayleigh(rng);
}

double rician_magnitude_pdf(double v, double kappa) {
    if (v < 0.0) return 0.0;
    const double c = 2.0 * std::sqrt(kappa * (kappa + 1.0)) * v;
    // I0(c) = e^c * i0e(c) folded into the exponent to avoid overflow
    return 2.0 * (kappa + 1.0) * v * std::exp(-kappa - (kappa + 1.0) * v * v + c) * specfun::bessel_i0e(c);
}

RicianMoments rician_moments(double kappa) {
    if (!(kappa >= 0.0)) throw std::domain_error("rician_moments: kappa must be >= 0");
    const double k = std::min(kappa, kRicianKappaCap);
    RicianMoments m;
    m.mean = 0.5 * std::sqrt(std::numbers::pi / (k + 1.0)) * specfun::laguerre_half(-k);
    m.second = 1.0;
    m.fourth = (2.0 + 4.0 * k + k * k) / ((k + 1.0) * (k + 1.0));
    return m;
}

ChannelDrawPhase1 sample_phase1_draw(std::size_t n_uavs, std::size_t n_gbs, double kappa, Rng& rng) {
    ChannelDrawPhase1 d{n_uavs, n_gbs, {}};
    d.gains.resize(n_uavs * n_gbs);
    for (auto& g : d.gains) g = sample_rician(kappa, rng);
    return d;
}

ChannelDrawPhase2 sample_phase2_draw(std::size_t n_rx, std::size_t n_tx, Rng& rng) {
    ChannelDrawPhase2 d{n_rx, n_tx, {}};
    d.gains.resize(n_rx * n_tx);
    for (auto& g : d.gains) g = sample_rayleigh(rng);
    return d;
}

namespace {

double link_distance_sq(const GbsLayout& gbs, const SwarmLayout& swarm, std::size_t n, std::size_t m) {
    const auto& u = swarm.positions[n];
    const auto& g = gbs.positions[m];
    const double dx = u.x - g.x;
    const double dy = u.y - g.y;
    return dx * dx + dy * dy + u.z * u.z;
}

}  // namespace

cplx phase1_channel(const GbsLayout& gbs, const SwarmLayout& swarm, const ChannelDrawPhase1& draw,
                    const Scenario& scenario, std::size_t n, std::size_t m) {
    const double alpha = scenario.config().pathloss_exp_cell;
    const double d_sq = link_distance_sq(gbs, swarm, n, m);
    return std::sqrt(scenario.ref_gain_cell() * std::pow(d_sq, -0.5 * alpha)) * draw.at(n, m);
}

std::vector<double> phase1_sinrs(const GbsLayout& gbs, const SwarmLayout& swarm,
                                 const ChannelDrawPhase1& draw, const Scenario& scenario,
                                 const Phase1Transmission& tx) {
    const std::size_t n_uavs = swarm.size();
    if (draw.n_uavs != n_uavs || draw.n_gbs != gbs.size()) {
        throw std::invalid_argument("phase1_sinrs: channel draw does not match the layouts");
    }
    const std::vector<int>& transmitters = tx.transmitters.empty() ? gbs.available_idx : tx.transmitters;
    const auto head = static_cast<std::size_t>(swarm.head_idx);

    std::vector<cplx> weights(transmitters.size(), cplx(1.0, 0.0));
    if (tx.weighting == Phase1Weighting::HeadEqualGain) {
        for (std::size_t i = 0; i < transmitters.size(); ++i) {
            const cplx h = phase1_channel(gbs, swarm, draw, scenario, head, transmitters[i]);
            const double mag = std::abs(h);
            weights[i] = mag > 0.0 ? std::conj(h) / mag : cplx(1.0, 0.0);
        }
    }

    const double power = scenario.tx_power_gbs_w();
    std::vector<double> sinr(n_uavs);
    for (std::size_t n = 0; n < n_uavs; ++n) {
        cplx signal(0.0, 0.0);
        for (std::size_t i = 0; i < transmitters.size(); ++i) {
            signal += weights[i] * phase1_channel(gbs, swarm, draw, scenario, n, transmitters[i]);
        }
        double interference = 0.0;
        for (int m : gbs.occupied_idx) {
            interference += std::norm(phase1_channel(gbs, swarm, draw, scenario, n, m));
        }
        sinr[n] = power * std::norm(signal) / (power * interference + scenario.noise_phase1_w());
    }
    return sinr;
}

std::vector<int> complement_of(std::span<const int> decoders, std::size_t n_uavs) {
    std::vector<char> in(n_uavs, 0);
    for (int k : decoders) in.at(static_cast<std::size_t>(k)) = 1;
    std::vector<int> rest;
    rest.reserve(n_uavs - decoders.size());
    for (std::size_t n = 0; n < n_uavs; ++n) {
        if (!in[n]) rest.push_back(static_cast<int>(n));
    }
    return rest;
}

std::vector<double> phase2_sinrs(const SwarmLayout& swarm, std::span<const int> decoders,
                                 const ChannelDrawPhase2& draw, const Scenario& scenario) {
    const std::vector<int> receivers = complement_of(decoders, swarm.size());
    std::vector<double> sinr(receivers.size(), 0.0);
    if (decoders.empty()) return sinr;
    if (draw.n_rx != receivers.size() || draw.n_tx != decoders.size()) {
        throw std::invalid_argument("phase2_sinrs: channel draw does not match receivers x decoders");
    }
    const double half_alpha = 0.5 * scenario.config().pathloss_exp_d2d;
    const double scale = scenario.d2d_snr_scale();
    for (std::size_t r = 0; r < receivers.size(); ++r) {
        cplx sum(0.0, 0.0);
        for (std::size_t t = 0; t < decoders.size(); ++t) {
            const double d = swarm.pair_distance(receivers[r], decoders[t]);
            sum += std::pow(d, -half_alpha) * draw.at(r, t);
        }
        sinr[r] = scale * std::norm(sum);
    }
    return sinr;
}

}  // namespace uavswarm

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "uavswarm/geometry.hpp"
#include "uavswarm/rng.hpp"
#include "uavswarm/scenario.hpp"

namespace uavswarm {

using cplx = std::complex<double>;

/// Rician factors above this are treated as pure line of sight.
inline constexpr double kRicianKappaCap = 1e12;

/// Unit-power Rician coefficient: sqrt(k/(k+1)) e^{j phi} + sqrt(1/(k+1)) CN(0,1),
/// with the line-of-sight phase phi uniform on [0, 2 pi).
cplx sample_rician(double kappa, Rng& rng);
/// CN(0, 1).
cplx sample_rayleigh(Rng& rng);

/// Density of |h| for a unit-power Rician coefficient.
double rician_magnitude_pdf(double v, double kappa);

struct RicianMoments {
    double mean = 0.0;    // E|h|
    double second = 1.0;  // E|h|^2
    double fourth = 0.0;  // E|h|^4
};

/// E|h| = (1/2) sqrt(pi / (k+1)) L_{1/2}(-k); E|h|^4 = (2 + 4k + k^2) / (k+1)^2.
RicianMoments rician_moments(double kappa);

/// Small-scale fading of every GBS-to-UAV link, N x M row-major.
struct ChannelDrawPhase1 {
    std::size_t n_uavs = 0;
    std::size_t n_gbs = 0;
    std::vector<cplx> gains;

    cplx at(std::size_t n, std::size_t m) const { return gains[n * n_gbs + m]; }
};

/// Rayleigh fading of the D2D links, receivers x transmitters row-major.
struct ChannelDrawPhase2 {
    std::size_t n_rx = 0;
    std::size_t n_tx = 0;
    std::vector<cplx> gains;

    cplx at(std::size_t r, std::size_t t) const { return gains[r * n_tx + t]; }
};

ChannelDrawPhase1 sample_phase1_draw(std::size_t n_uavs, std::size_t n_gbs, double kappa, Rng& rng);
ChannelDrawPhase2 sample_phase2_draw(std::size_t n_rx, std::size_t n_tx, Rng& rng);

/// How the transmitting GBSs weight the common message in the cellular phase.
enum class Phase1Weighting {
    /// w_m = conj(h_{head,m}) / |h_{head,m}|: coherent at the swarm head.
    HeadEqualGain,
    /// w_m = 1: no channel knowledge.
    Unit,
};

/// Which available GBSs transmit and how. Occupied GBSs always interfere.
struct Phase1Transmission {
    /// Indices into GbsLayout::positions. Empty means "all available GBSs".
    std::vector<int> transmitters;
    Phase1Weighting weighting = Phase1Weighting::HeadEqualGain;
};

/// Complex full channel sqrt(beta / d^alpha) * h from GBS m to UAV n, with the
/// exact 3D GBS-to-UAV distance.
cplx phase1_channel(const GbsLayout& gbs, const SwarmLayout& swarm, const ChannelDrawPhase1& draw,
                    const Scenario& scenario, std::size_t n, std::size_t m);

/// Cellular-phase SINR of every UAV:
///   P |sum_{m in tx} w_m h_{n,m}|^2 / (P sum_{m in occupied} |h_{n,m}|^2 + sigma^2).
/// With head equal-gain weights the head's own SINR reduces to
/// P (sum |h_{head,m}|)^2 / (interference + noise).
std::vector<double> phase1_sinrs(const GbsLayout& gbs, const SwarmLayout& swarm,
                                 const ChannelDrawPhase1& draw, const Scenario& scenario,
                                 const Phase1Transmission& tx = {});

/// UAVs not in `decoders`, ascending. These are the D2D receivers.
std::vector<int> complement_of(std::span<const int> decoders, std::size_t n_uavs);

/// D2D-phase SINR at each receiver (UAVs outside `decoders`, ascending):
///   P~ beta~ |sum_{k in decoders} d~_{n,k}^{-alpha~/2} g_{n,k}|^2 / sigma~^2.
/// `draw` is receivers x decoders in the same orders. No decoders means no
/// transmission: every receiver gets SINR 0.
std::vector<double> phase2_sinrs(const SwarmLayout& swarm, std::span<const int> decoders,
                                 const ChannelDrawPhase2& draw, const Scenario& scenario);

}  // namespace uavswarm

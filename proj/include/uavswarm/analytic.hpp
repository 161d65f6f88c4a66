#pragma once

#include <span>

#include "uavswarm/scenario.hpp"
#include "uavswarm/specfun.hpp"

namespace uavswarm {

/// Mean and variance of a random variable.
struct MomentPair {
    double mean = 0.0;
    double var = 0.0;
};

/// Gamma law with shape a and rate b (Pearson type III).
struct GammaFit {
    double a = 0.0;
    double b = 0.0;

    double mean() const { return a / b; }
    double variance() const { return a / (b * b); }
};

/// Inverse-Gamma law with shape a and scale b (Pearson type V): 1/X ~ Gamma(a, rate b).
struct InvGammaFit {
    double a = 0.0;
    double b = 0.0;

    double mean() const { return b / (a - 1.0); }
    double variance() const { return b * b / ((a - 1.0) * (a - 1.0) * (a - 2.0)); }
};

/// a = mu^2 / nu, b = mu / nu. Throws std::domain_error unless mu, nu > 0.
GammaFit gamma_fit(double mu, double nu);
GammaFit gamma_fit(const MomentPair& m);
/// a = mu^2 / nu + 2, b = (mu^2 / nu + 1) mu. Throws std::domain_error unless mu, nu > 0.
InvGammaFit inv_gamma_fit(double mu, double nu);
InvGammaFit inv_gamma_fit(const MomentPair& m);

/// E[d^-p] for the GBS-to-swarm-centre distance d with density 2u/R^2 on
/// [H, sqrt(R^2 + H^2)].
double gbs_inverse_power_moment(double p, double coverage_radius_m, double altitude_m);

/// Per-GBS moments of d^(-alpha/2) |h| (one available GBS).
MomentPair moments_head_signal(const Scenario& scenario);
/// Moments of sum over the M1 occupied GBSs of d^-alpha |h|^2.
MomentPair moments_interference(const Scenario& scenario);
/// Moments of sum over the M0 available GBSs of d^-alpha.
MomentPair moments_pathloss_sum(const Scenario& scenario);

struct HeadProbOptions {
    /// Largest 2F2 argument b_sig^2 theta / (4 b_int) handled by the series.
    double hyp_arg_cap = 500.0;
    /// Largest tolerated rounding error of the series difference; beyond it
    /// the quadrature route is used instead.
    double cancellation_tol = 1e-7;
    specfun::SeriesControl series{};
};

struct HeadProbResult {
    double value = 1.0;
    bool used_quadrature = false;
    double hyp_arg = 0.0;
    /// Rounding error bound of the series route (0 when not evaluated).
    double series_error = 0.0;
};

/// P(head SINR >= theta) in closed form, with the quadrature fallback.
HeadProbResult head_decode_prob_detail(double theta, const Scenario& scenario,
                                       const HeadProbOptions& opt = {});
double head_decode_prob(double theta, const Scenario& scenario, const HeadProbOptions& opt = {});
/// Same probability by quadrature over the interference law:
///   E[Q(a_sig, b_sig sqrt(theta X_int))].
double head_decode_prob_quadrature(double theta, const Scenario& scenario);

/// P(member SINR >= theta) = z^a Psi(a, 1 + a - a_Y; z), z = b b_Y / theta.
double member_decode_prob(double theta, const Scenario& scenario);

/// E|Theta^(I)| = P_head + (N - 1) P_member at the phase-I threshold.
double phase1_expected(const Scenario& scenario);

/// Moments of d~^-alpha~ for one relay-receiver pair under the truncated
/// disk pair-distance law.
MomentPair d2d_relay_moments(const Scenario& scenario);
/// Inverse-Gamma fit of the aggregate D2D path gain from k_effective relays
/// (continuous in k_effective).
InvGammaFit d2d_fit(double k_effective, const Scenario& scenario);
InvGammaFit d2d_fit(double k_effective, const MomentPair& per_relay);
/// (b_Z / (b_Z + sigma~^2 theta / (P~ beta~)))^a_Z.
double phase2_decode_prob(double theta, double k_effective, const Scenario& scenario);

struct AnalyticBreakdown {
    double p_head = 1.0;
    double p_member = 1.0;
    double expected_phase1 = 0.0;
    double k_effective = 0.0;
    double p_phase2 = 1.0;
    double eta = 1.0;
    /// E|Theta^(I)| < 1: the point substitution K = E|Theta^(I)| is outside
    /// the regime it was derived for.
    bool out_of_regime = false;
    bool head_used_quadrature = false;
};

/// eta = (E|Theta^(I)| + (N - K) P^(II)(K)) / N with K = E|Theta^(I)|.
AnalyticBreakdown reliability(const Scenario& scenario);

/// Mixture form: sum_K p_K (K + (N - K) P^(II)(K)) / N for a phase-I count
/// mass function p_0..p_N (typically estimated by simulation).
double reliability_mixture(const Scenario& scenario, std::span<const double> count_pmf);

}  // namespace uavswarm

#include "uavswarm/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "uavswarm/fading.hpp"
#include "uavswarm/geometry.hpp"

namespace uavswarm {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double clamp_probability(double p) { return std::clamp(p, 0.0, 1.0); }

// Fits shared by the phase-I probabilities. Signal and interference carry the
// same P * beta, so both drop out of the SINR ratio.
struct Phase1Fits {
    GammaFit signal;        // sum over available GBSs of d^(-alpha/2) |h|
    GammaFit interference;  // sum over occupied GBSs of d^-alpha |h|^2
    InvGammaFit pathloss;   // sum over available GBSs of d^-alpha
};

Phase1Fits phase1_fits(const Scenario& s) {
    const MomentPair sig = moments_head_signal(s);
    const double m0 = s.m_available();
    return {gamma_fit(m0 * sig.mean, m0 * sig.var), gamma_fit(moments_interference(s)),
            inv_gamma_fit(moments_pathloss_sum(s))};
}

// int_0^inf f(s) s^(a-1) e^-s / Gamma(a) ds, split at the mode.
template <class F>
double gamma_expectation(F&& f, double a) {
    specfun::QuadOptions opt;
    opt.abs_tol = 1e-13;
    opt.rel_tol = 1e-11;
    const double norm = specfun::log_gamma(a);
    const double split = std::max(a, 1.0);
    double head = 0.0;
    if (a < 1.0) {
        // u = s^a removes the s^(a-1) singularity: ds s^(a-1) = du / a
        const double inv_a = 1.0 / a;
        const double log_a = std::log(a);
        head = specfun::integrate(
            [&](double u) {
                const double s = std::pow(u, inv_a);
                return f(s) * std::exp(-s - norm - log_a);
            },
            0.0, std::pow(split, a), opt);
    } else {
        head = specfun::integrate(
            [&](double s) {
                if (s <= 0.0) return a == 1.0 ? f(0.0) * std::exp(-norm) : 0.0;
                return f(s) * std::exp((a - 1.0) * std::log(s) - s - norm);
            },
            0.0, split, opt);
    }
    const double tail = specfun::integrate(
        [&](double s) { return f(s) * std::exp((a - 1.0) * std::log(s) - s - norm); }, split,
        std::numeric_limits<double>::infinity(), opt);
    return head + tail;
}

double head_prob_quadrature(double theta, const GammaFit& sig, const GammaFit& intf) {
    // X_int = s / b_int; the head decodes when X_sig >= sqrt(theta X_int).
    const double scale = sig.b * std::sqrt(theta / intf.b);
    return gamma_expectation(
        [&](double s) { return specfun::regularized_gamma_upper(sig.a, scale * std::sqrt(s)); },
        intf.a);
}

}  // namespace

GammaFit gamma_fit(double mu, double nu) {
    if (!(mu > 0.0) || !(nu > 0.0) || !std::isfinite(mu) || !std::isfinite(nu)) {
        throw std::domain_error("gamma_fit: mean and variance must be positive and finite");
    }
    return {mu * mu / nu, mu / nu};
}

GammaFit gamma_fit(const MomentPair& m) { return gamma_fit(m.mean, m.var); }

InvGammaFit inv_gamma_fit(double mu, double nu) {
    if (!(mu > 0.0) || !(nu > 0.0) || !std::isfinite(mu) || !std::isfinite(nu)) {
        throw std::domain_error("inv_gamma_fit: mean and variance must be positive and finite");
    }
    const double r = mu * mu / nu;
    return {r + 2.0, (r + 1.0) * mu};
}

InvGammaFit inv_gamma_fit(const MomentPair& m) { return inv_gamma_fit(m.mean, m.var); }

double gbs_inverse_power_moment(double p, double coverage_radius_m, double altitude_m) {
    const double r2 = coverage_radius_m * coverage_radius_m;
    // 2/R^2 int_H^U u^(1-p) du = 2/R^2 * (U^q - H^q)/q with q = 2 - p,
    // written as H^q expm1(q log(U/H))/q so q -> 0 is continuous.
    const double log_ratio = 0.5 * std::log1p(r2 / (altitude_m * altitude_m));
    const double q = 2.0 - p;
    const double integral = q == 0.0 ? log_ratio
                                     : std::pow(altitude_m, q) * std::expm1(q * log_ratio) / q;
    return 2.0 * integral / r2;
}

MomentPair moments_head_signal(const Scenario& s) {
    const auto& c = s.config();
    const RicianMoments h = rician_moments(c.rician_k);
    const double mu = gbs_inverse_power_moment(0.5 * c.pathloss_exp_cell, c.coverage_radius_m,
                                               c.swarm_altitude_m) * h.mean;
    const double second =
        gbs_inverse_power_moment(c.pathloss_exp_cell, c.coverage_radius_m, c.swarm_altitude_m) * h.second;
    return {mu, second - mu * mu};
}

MomentPair moments_interference(const Scenario& s) {
    const auto& c = s.config();
    const RicianMoments h = rician_moments(c.rician_k);
    const double mu = gbs_inverse_power_moment(c.pathloss_exp_cell, c.coverage_radius_m, c.swarm_altitude_m);
    const double second =
        gbs_inverse_power_moment(2.0 * c.pathloss_exp_cell, c.coverage_radius_m, c.swarm_altitude_m) * h.fourth;
    const double m1 = c.m_occupied;
    return {m1 * mu, m1 * (second - mu * mu)};
}

MomentPair moments_pathloss_sum(const Scenario& s) {
    const auto& c = s.config();
    const double mu = gbs_inverse_power_moment(c.pathloss_exp_cell, c.coverage_radius_m, c.swarm_altitude_m);
    const double second =
        gbs_inverse_power_moment(2.0 * c.pathloss_exp_cell, c.coverage_radius_m, c.swarm_altitude_m);
    const double m0 = c.m_available;
    return {m0 * mu, m0 * (second - mu * mu)};
}

HeadProbResult head_decode_prob_detail(double theta, const Scenario& scenario, const HeadProbOptions& opt) {
    if (!(theta >= 0.0)) throw std::domain_error("head_decode_prob: theta must be >= 0");
    HeadProbResult r;
    if (theta == 0.0 || scenario.m_occupied() == 0) return r;  // interference-free
    if (std::isinf(theta)) {
        r.value = 0.0;
        return r;
    }
    const Phase1Fits f = phase1_fits(scenario);
    const double as = f.signal.a;
    const double ai = f.interference.a;
    const double log_w = std::log(f.signal.b * f.signal.b * theta / f.interference.b);
    r.hyp_arg = 0.25 * std::exp(log_w);

    if (r.hyp_arg <= opt.hyp_arg_cap) {
        try {
            const auto s1 = specfun::hyp2f2_series(0.5 * as, ai + 0.5 * as, 0.5, 1.0 + 0.5 * as, r.hyp_arg, opt.series);
            const auto s2 = specfun::hyp2f2_series(ai + 0.5 * as + 0.5, 0.5 * as + 0.5, 1.5, 0.5 * as + 1.5,
                                                   r.hyp_arg, opt.series);
            const double log_pre = 0.5 * as * log_w - specfun::log_gamma(ai) - specfun::log_gamma(as);
            const double t1 = std::exp(log_pre + specfun::log_gamma(ai + 0.5 * as) - std::log(as)) * s1.value;
            const double t2 = std::exp(log_pre + 0.5 * log_w + specfun::log_gamma(ai + 0.5 * as + 0.5) -
                                       std::log(as + 1.0)) * s2.value;
            r.series_error = (opt.series.rel_tol + 16.0 * kEps) * (std::abs(t1) + std::abs(t2));
            if (std::isfinite(t1) && std::isfinite(t2) && r.series_error <= opt.cancellation_tol) {
                r.value = clamp_probability(1.0 - (t1 - t2));
                return r;
            }
        } catch (const NumericalError&) {
            // fall through to quadrature
        }
    }
    r.used_quadrature = true;
    r.value = clamp_probability(head_prob_quadrature(theta, f.signal, f.interference));
    return r;
}

double head_decode_prob(double theta, const Scenario& scenario, const HeadProbOptions& opt) {
    return head_decode_prob_detail(theta, scenario, opt).value;
}

double head_decode_prob_quadrature(double theta, const Scenario& scenario) {
    if (!(theta >= 0.0)) throw std::domain_error("head_decode_prob: theta must be >= 0");
    if (theta == 0.0 || scenario.m_occupied() == 0) return 1.0;
    if (std::isinf(theta)) return 0.0;
    const Phase1Fits f = phase1_fits(scenario);
    return clamp_probability(head_prob_quadrature(theta, f.signal, f.interference));
}

double member_decode_prob(double theta, const Scenario& scenario) {
    if (!(theta >= 0.0)) throw std::domain_error("member_decode_prob: theta must be >= 0");
    if (theta == 0.0 || scenario.m_occupied() == 0) return 1.0;
    if (std::isinf(theta)) return 0.0;
    const Phase1Fits f = phase1_fits(scenario);
    const double z = f.interference.b * f.pathloss.b / theta;
    const double a = f.interference.a;
    return clamp_probability(specfun::tricomi_u_scaled(a, 1.0 + a - f.pathloss.a, z));
}

double phase1_expected(const Scenario& scenario) {
    const double theta = scenario.theta_phase1();
    const double n = scenario.n_uavs();
    double e = head_decode_prob(theta, scenario);
    if (n > 1) e += (n - 1.0) * member_decode_prob(theta, scenario);
    return std::clamp(e, 0.0, n);
}

MomentPair d2d_relay_moments(const Scenario& scenario) {
    const auto& c = scenario.config();
    if (c.min_separation_m <= 0.0) {
        throw NumericalError("d2d moments diverge without a minimum UAV separation");
    }
    const PairDistanceDistribution dist(scenario);
    const double alpha = c.pathloss_exp_d2d;
    specfun::QuadOptions opt;
    opt.abs_tol = 0.0;
    opt.rel_tol = 1e-10;
    const double mu = specfun::integrate([&](double w) { return std::pow(w, -alpha) * dist.pdf(w); },
                                         dist.lower(), dist.upper(), opt);
    const double second = specfun::integrate(
        [&](double w) { return std::pow(w, -2.0 * alpha) * dist.pdf(w); }, dist.lower(), dist.upper(), opt);
    return {mu, second - mu * mu};
}

InvGammaFit d2d_fit(double k_effective, const MomentPair& per_relay) {
    if (!(k_effective > 0.0)) throw std::domain_error("d2d_fit: k_effective must be > 0");
    return inv_gamma_fit(k_effective * per_relay.mean, k_effective * per_relay.var);
}

InvGammaFit d2d_fit(double k_effective, const Scenario& scenario) {
    return d2d_fit(k_effective, d2d_relay_moments(scenario));
}

namespace {

double phase2_prob_from_fit(double theta, const InvGammaFit& z, const Scenario& s) {
    const double c = theta / s.d2d_snr_scale();
    return clamp_probability(std::exp(-z.a * std::log1p(c / z.b)));
}

double phase2_prob(double theta, double k, const MomentPair& per_relay, const Scenario& s) {
    if (k < 0.0) throw std::domain_error("phase2_decode_prob: k_effective must be >= 0");
    if (k == 0.0) return 0.0;  // nobody relays
    if (theta == 0.0) return 1.0;
    return phase2_prob_from_fit(theta, d2d_fit(k, per_relay), s);
}

}  // namespace

double phase2_decode_prob(double theta, double k_effective, const Scenario& scenario) {
    if (!(theta >= 0.0)) throw std::domain_error("phase2_decode_prob: theta must be >= 0");
    if (!(k_effective > 0.0)) throw std::domain_error("phase2_decode_prob: k_effective must be > 0");
    if (theta == 0.0) return 1.0;
    return phase2_prob_from_fit(theta, d2d_fit(k_effective, scenario), scenario);
}

AnalyticBreakdown reliability(const Scenario& scenario) {
    AnalyticBreakdown out;
    const double n = scenario.n_uavs();
    const double theta1 = scenario.theta_phase1();
    const HeadProbResult head = head_decode_prob_detail(theta1, scenario);
    out.p_head = head.value;
    out.head_used_quadrature = head.used_quadrature;
    out.p_member = member_decode_prob(theta1, scenario);
    out.expected_phase1 = std::clamp(out.p_head + (n - 1.0) * out.p_member, 0.0, n);
    out.k_effective = out.expected_phase1;
    out.out_of_regime = out.k_effective < 1.0;

    if (out.k_effective >= n) {
        out.p_phase2 = 1.0;
        out.eta = 1.0;
        return out;
    }
    out.p_phase2 = phase2_prob(scenario.theta_phase2(), out.k_effective, d2d_relay_moments(scenario), scenario);
    out.eta = std::clamp((out.expected_phase1 + (n - out.k_effective) * out.p_phase2) / n, 0.0, 1.0);
    return out;
}

double reliability_mixture(const Scenario& scenario, std::span<const double> count_pmf) {
    const int n = scenario.n_uavs();
    if (count_pmf.size() != static_cast<std::size_t>(n) + 1) {
        throw std::invalid_argument("reliability_mixture: need a mass function over 0..N");
    }
    const MomentPair per_relay = d2d_relay_moments(scenario);
    const double theta2 = scenario.theta_phase2();
    double eta = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double p = count_pmf[k];
        if (p == 0.0) continue;
        const double p2 = k == n ? 1.0 : phase2_prob(theta2, k, per_relay, scenario);
        eta += p * (k + (n - k) * p2) / n;
    }
    return std::clamp(eta, 0.0, 1.0);
}

}  // namespace uavswarm

#pragma once
// Slow, independent reference computations shared by the unit and acceptance tests.

#include <cmath>
#include <limits>

#include "uavswarm/analytic.hpp"
#include "uavswarm/quadrature.hpp"

namespace oracle {

// Fixed-length Pochhammer series in long double, no early exit.
inline long double hyp2f2(long double a1, long double a2, long double b1, long double b2, long double z,
                          int terms = 200) {
    long double term = 1.0L, sum = 1.0L;
    for (int n = 0; n < terms; ++n) {
        term *= (a1 + n) * (a2 + n) / ((b1 + n) * (b2 + n)) * z / (n + 1);
        sum += term;
    }
    return sum;
}

inline long double hyp1f1(long double a, long double b, long double z, int terms = 200) {
    long double term = 1.0L, sum = 1.0L;
    for (int n = 0; n < terms; ++n) {
        term *= (a + n) / (b + n) * z / (n + 1);
        sum += term;
    }
    return sum;
}

// I_nu(z) = sum_k (z/2)^(2k+nu) / (k! (k+nu)!), 40 terms.
inline long double bessel_i(int nu, long double z) {
    long double term = nu == 0 ? 1.0L : z / 2;
    long double sum = term;
    for (int k = 1; k < 40; ++k) {
        term *= (z / 2) * (z / 2) / (static_cast<long double>(k) * (k + nu));
        sum += term;
    }
    return sum;
}

// Gamma(a) density in the scaled variable s = rate * x.
inline double gamma_density(double a, double s) {
    if (s <= 0.0) return 0.0;
    return std::exp((a - 1.0) * std::log(s) - s - std::lgamma(a));
}

inline uavswarm::specfun::QuadOptions tight() {
    uavswarm::specfun::QuadOptions o;
    o.abs_tol = 1e-14;
    o.rel_tol = 1e-12;
    o.max_intervals = 20000;
    return o;
}

struct Phase1Fits {
    uavswarm::GammaFit sig, intf;
    uavswarm::InvGammaFit path;
};

inline Phase1Fits fits(const uavswarm::Scenario& s) {
    using namespace uavswarm;
    const MomentPair h = moments_head_signal(s);
    const double m0 = s.m_available();
    return {gamma_fit(m0 * h.mean, m0 * h.var), gamma_fit(moments_interference(s)),
            inv_gamma_fit(moments_pathloss_sum(s))};
}

// 1 - int_0^inf f_int(x) int_0^sqrt(theta x) f_sig(y) dy dx, both densities
// integrated numerically (no incomplete-gamma function involved).
inline double head_prob_2d(double theta, const uavswarm::Scenario& s) {
    using uavswarm::specfun::integrate;
    const Phase1Fits f = fits(s);
    const double inf = std::numeric_limits<double>::infinity();
    auto inner = [&](double s_int) {
        // y-range in the scaled signal variable t = b_sig * y
        const double upper = f.sig.b * std::sqrt(theta * s_int / f.intf.b);
        if (upper <= 0.0) return 0.0;
        const double mode = std::max(f.sig.a - 1.0, 0.0);
        if (upper <= mode) return integrate([&](double t) { return gamma_density(f.sig.a, t); }, 0.0, upper, tight());
        return integrate([&](double t) { return gamma_density(f.sig.a, t); }, 0.0, mode, tight()) +
               integrate([&](double t) { return gamma_density(f.sig.a, t); }, mode, upper, tight());
    };
    auto outer = [&](double s_int) { return inner(s_int) * gamma_density(f.intf.a, s_int); };
    const double m = std::max(f.intf.a, 1.0);
    const double miss = integrate(outer, 0.0, m, tight()) + integrate(outer, m, 4.0 * m, tight()) +
                        integrate(outer, 4.0 * m, inf, tight());
    return 1.0 - miss;
}

// int_0^inf (b_Y / (b_Y + theta y))^a_Y f_int(y) dy: the member probability
// before the Tricomi closure.
inline double member_prob_integral(double theta, const uavswarm::Scenario& s) {
    using uavswarm::specfun::integrate;
    const Phase1Fits f = fits(s);
    auto g = [&](double s_int) {
        const double y = s_int / f.intf.b;
        return std::exp(-f.path.a * std::log1p(theta * y / f.path.b)) * gamma_density(f.intf.a, s_int);
    };
    const double m = std::max(f.intf.a, 1.0);
    return integrate(g, 0.0, m, tight()) + integrate(g, m, 4.0 * m, tight()) +
           integrate(g, 4.0 * m, std::numeric_limits<double>::infinity(), tight());
}

}  // namespace oracle

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace uavswarm {

/// A series or quadrature failed to reach its tolerance.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace specfun {

struct QuadOptions {
    double abs_tol = 1e-13;
    double rel_tol = 1e-11;
    int max_intervals = 5000;
};

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;
    int intervals = 0;
    bool converged = false;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double lo, hi, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gauss_kronrod15(F& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(center);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    double abs_sum = std::abs(kronrod);
    double fv[15];
    fv[7] = fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        fv[j] = f1;
        fv[14 - j] = f2;
        kronrod += kKronrodWeights[j] * (f1 + f2);
        abs_sum += kKronrodWeights[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (f1 + f2);
    }
    const double mean = 0.5 * kronrod;
    double asc = kKronrodWeights[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j) {
        asc += kKronrodWeights[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));
    }
    const double value = kronrod * half;
    abs_sum *= std::abs(half);
    asc *= std::abs(half);
    double err = std::abs((kronrod - gauss) * half);
    if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * abs_sum;
    if (roundoff > err) err = roundoff;
    return {lo, hi, value, err};
}

template <class F>
QuadResult adaptive_finite(F& f, double lo, double hi, const QuadOptions& opt) {
    std::priority_queue<Segment> heap;
    Segment first = gauss_kronrod15(f, lo, hi);
    double total = first.value;
    double total_err = first.error;
    heap.push(first);
    int intervals = 1;
    while (total_err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
        if (intervals >= opt.max_intervals) {
            return {total, total_err, intervals, false};
        }
        Segment worst = heap.top();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi)) {
            // interval can no longer be split in double precision
            return {total, total_err, intervals, false};
        }
        heap.pop();
        Segment left = gauss_kronrod15(f, worst.lo, mid);
        Segment right = gauss_kronrod15(f, mid, worst.hi);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++intervals;
        if (intervals % 64 == 0) {
            // re-sum to keep cancellation drift out of the running totals
            total = 0.0;
            total_err = 0.0;
            auto copy = heap;
            while (!copy.empty()) {
                total += copy.top().value;
                total_err += copy.top().error;
                copy.pop();
            }
        }
    }
    return {total, total_err, intervals, true};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod quadrature of f over [lo, hi]. Either limit may be
/// infinite; a half-infinite range [a, inf) is mapped by t = a + u / (1 - u).
/// Endpoints are never evaluated, so integrable endpoint singularities are
/// tolerated (at the cost of extra subdivisions).
template <class F>
QuadResult adaptive_quad(F&& f, double lo, double hi, const QuadOptions& opt = {}) {
    if (std::isnan(lo) || std::isnan(hi)) throw std::domain_error("adaptive_quad: NaN limit");
    if (lo == hi) return {0.0, 0.0, 0, true};
    if (lo > hi) {
        QuadResult r = adaptive_quad(f, hi, lo, opt);
        r.value = -r.value;
        return r;
    }
    const bool lo_inf = std::isinf(lo);
    const bool hi_inf = std::isinf(hi);
    if (!lo_inf && !hi_inf) {
        return detail::adaptive_finite(f, lo, hi, opt);
    }
    if (lo_inf && hi_inf) {
        QuadResult a = adaptive_quad(f, -std::numeric_limits<double>::infinity(), 0.0, opt);
        QuadResult b = adaptive_quad(f, 0.0, std::numeric_limits<double>::infinity(), opt);
        return {a.value + b.value, a.abs_error + b.abs_error, a.intervals + b.intervals,
                a.converged && b.converged};
    }
    if (hi_inf) {
        auto mapped = [&](double u) {
            const double one_minus = 1.0 - u;
            const double t = lo + u / one_minus;
            const double v = f(t);
            return v == 0.0 ? 0.0 : v / (one_minus * one_minus);
        };
        return detail::adaptive_finite(mapped, 0.0, 1.0, opt);
    }
    auto mapped = [&](double u) {
        const double one_minus = 1.0 - u;
        const double t = hi - u / one_minus;
        const double v = f(t);
        return v == 0.0 ? 0.0 : v / (one_minus * one_minus);
    };
    return detail::adaptive_finite(mapped, 0.0, 1.0, opt);
}

/// adaptive_quad that throws NumericalError when the tolerance is not met.
template <class F>
double integrate(F&& f, double lo, double hi, const QuadOptions& opt = {}) {
    QuadResult r = adaptive_quad(f, lo, hi, opt);
    if (!r.converged) {
        throw NumericalError("adaptive quadrature did not converge (estimated error " +
                             std::to_string(r.abs_error) + " after " + std::to_string(r.intervals) +
                             " intervals)");
    }
    return r.value;
}

}  // namespace specfun
}  // namespace uavswarm

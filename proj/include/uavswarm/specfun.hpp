#pragma once

#include "uavswarm/quadrature.hpp"

namespace uavswarm::specfun {

/// Termination control for the hypergeometric power series.
struct SeriesControl {
    double rel_tol = 1e-12;
    int max_terms = 100000;
};

/// Value of a power series plus the largest term magnitude seen, which bounds
/// the rounding error of an alternating sum (about eps * max_abs_term).
struct SeriesResult {
    double value = 0.0;
    double max_abs_term = 0.0;
    int terms = 0;
};

double log_gamma(double a);

/// gamma(a, z) = int_0^z t^(a-1) e^-t dt.
double lower_incomplete_gamma(double a, double z);
/// P(a, z) = gamma(a, z) / Gamma(a), in [0, 1].
double regularized_gamma(double a, double z);
/// Q(a, z) = 1 - P(a, z), computed without cancellation.
double regularized_gamma_upper(double a, double z);

double bessel_i0(double z);
double bessel_i1(double z);
/// exp(-|z|) * I0(z) and exp(-|z|) * I1(z); finite for any real z.
double bessel_i0e(double z);
double bessel_i1e(double z);

/// Laguerre function L_{1/2}(x) through its Bessel representation
/// e^(x/2) [(1 - x) I0(-x/2) - x I1(-x/2)].
double laguerre_half(double x);

SeriesResult hyp1f1_series(double a, double b, double z, const SeriesControl& ctl = {});
double hyp1f1(double a, double b, double z, const SeriesControl& ctl = {});

SeriesResult hyp2f2_series(double a1, double a2, double b1, double b2, double z,
                           const SeriesControl& ctl = {});
double hyp2f2(double a1, double a2, double b1, double b2, double z, const SeriesControl& ctl = {});

/// Tricomi confluent hypergeometric function Psi(a, b; z) = U(a, b, z),
/// a > 0, z > 0, by quadrature of its Laplace-type integral.
double tricomi_u(double a, double b, double z);
/// z^a * Psi(a, b; z). Stays O(1) for large z where Psi itself underflows.
double tricomi_u_scaled(double a, double b, double z);

}  // namespace uavswarm::specfun

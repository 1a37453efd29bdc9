#pragma once

// Special functions backing the semi-analytic performance formulas: integer-order
// incomplete gamma/beta, the terminating Kummer and Appell hypergeometrics, the
// Gauss 2F1 series, and generalized Laguerre polynomials. Parameters in this
// artifact stay small integers, so everything is finite sums or short series in
// double precision with compensated summation.

#include <complex>

namespace cfarfp {

struct SeriesResult {
    double value = 0.0;
    int terms_used = 0;
    double truncation_bound = 0.0;  // estimated magnitude of the dropped tail
};

// Euler's upper incomplete gamma for integer order l >= 1:
// Gamma(l, x) = (l-1)! e^-x sum_{i<l} x^i / i!
double upper_gamma_int(int l, double x);

// Regularized version Q(l, x) = Gamma(l, x) / Gamma(l).
double reg_upper_gamma_int(int l, double x);

// Kummer 1F1(-n, b; z) for integer n >= 0, b >= 1 (a terminating polynomial).
double hyp1f1_poly(int n, int b, double z);

// Generalized Laguerre L_n^(alpha)(x) by the three-term recurrence in n.
double laguerre(int n, int alpha, double x);

// Regularized incomplete beta I_x(a, b) for integer a, b >= 1, via the exact
// binomial-tail sum.
double reg_inc_beta_int(int a, int b, double x);

// Gauss 2F1(a, b; c; z) for z < 1. Negative z is mapped into [0, 1) by the
// Pfaff transformation; terminating (polynomial) parameter pairs are summed
// exactly for any z.
SeriesResult hyp2f1(double a, double b, double c, double z);

// Appell F1(a, b, b', c; x, y) restricted to nonpositive integer b = -M, where
// the double series collapses to a finite sum over the b-index:
//   sum_{m=0}^{M} (a)_m (b)_m / ((c)_m m!) x^m 2F1(a+m, b'; c+m; y),  y < 1.
double appell_f1_poly(double a, int b, double bp, double c, double x, double y);

// Binomial coefficient as double (log-space fallback for large arguments).
double binomial(int n, int k);

}  // namespace cfarfp

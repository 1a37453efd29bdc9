#pragma once

// Bracketing scalar root finders (Brent) used for threshold calibration,
// intercept retargeting and Pfa-restoring shifts.

#include <cmath>
#include <functional>
#include <stdexcept>

namespace cfarfp {

struct RootOptions {
    double x_tol = 1e-14;
    double f_tol = 0.0;  // stop early once |f| <= f_tol (0 disables)
    int max_iter = 200;
};

// Brent's method on [a, b]; fa, fb must bracket a root (opposite signs).
template <class F>
double brent(const F& f, double a, double b, double fa, double fb,
             const RootOptions& opts = {}) {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw std::invalid_argument("brent: endpoints do not bracket a root");

    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < opts.max_iter; ++it) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a; fc = fa; d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * 2.220446049250313e-16 * std::abs(b) + 0.5 * opts.x_tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0 || std::abs(fb) <= opts.f_tol) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q, r;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
    }
    return b;
}

template <class F>
double brent(const F& f, double a, double b, const RootOptions& opts = {}) {
    return brent(f, a, b, f(a), f(b), opts);
}

}  // namespace cfarfp

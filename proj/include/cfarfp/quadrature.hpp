#pragma once

// Adaptive Gauss-Legendre quadrature with interval bisection. Panels are refined
// until the bisection estimate changes by less than the allotted absolute
// tolerance; failure to converge at max depth is reported, never silently
// accepted.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "cfarfp/errors.hpp"

namespace cfarfp {

struct QuadOptions {
    double abs_tol = 1e-10;
    int max_depth = 40;
};

namespace detail {

// 15-point Gauss-Legendre abscissae/weights on [0, 1] (symmetric half stored).
inline constexpr double kGl15Nodes[8] = {
    0.000000000000000000, 0.201194093997434514, 0.394151347077563385,
    0.570972172608538830, 0.724417731360170070, 0.848206583410427206,
    0.937273392400705951, 0.987992518020485377};
inline constexpr double kGl15Weights[8] = {
    0.202578241925561287, 0.198431485327111579, 0.186161000015562211,
    0.166269205816993920, 0.139570677926154324, 0.107159220467171939,
    0.070366047488108124, 0.030753241996117269};

template <class F>
double gauss15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double sum = kGl15Weights[0] * f(c);
    for (int i = 1; i < 8; ++i) {
        const double dx = h * kGl15Nodes[i];
        sum += kGl15Weights[i] * (f(c + dx) + f(c - dx));
    }
    return sum * h;
}

template <class F>
double adapt(const F& f, double a, double b, double whole, double tol, int depth,
             int max_depth) {
    const double c = 0.5 * (a + b);
    const double left = gauss15(f, a, c);
    const double right = gauss15(f, c, b);
    const double delta = left + right - whole;
    if (std::abs(delta) <= tol) return left + right;
    if (depth >= max_depth)
        throw QuadratureError("adaptive quadrature: tolerance not reached at max depth");
    return adapt(f, a, c, left, 0.5 * tol, depth + 1, max_depth) +
           adapt(f, c, b, right, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace detail

// Integrate f over [a, b] to absolute tolerance opts.abs_tol.
template <class F>
double integrate(const F& f, double a, double b, const QuadOptions& opts = {}) {
    if (a == b) return 0.0;
    return detail::adapt(f, a, b, detail::gauss15(f, a, b), opts.abs_tol, 0,
                         opts.max_depth);
}

// Integrate with forced panel boundaries (used so that discontinuities of
// piecewise boundaries never fall inside a quadrature panel). `breaks` must be
// sorted; entries outside (a, b) are ignored.
template <class F>
double integrate_panels(const F& f, double a, double b, std::span<const double> breaks,
                        const QuadOptions& opts = {}) {
    std::vector<double> edges;
    edges.push_back(a);
    for (double x : breaks)
        if (x > a && x < b) edges.push_back(x);
    edges.push_back(b);
    const double tol = opts.abs_tol / static_cast<double>(edges.size() - 1);
    QuadOptions panel_opts{tol, opts.max_depth};
    double total = 0.0;
    for (size_t i = 0; i + 1 < edges.size(); ++i)
        total += integrate(f, edges[i], edges[i + 1], panel_opts);
    return total;
}

}  // namespace cfarfp

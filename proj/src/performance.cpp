#include "cfarfp/performance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "cfarfp/errors.hpp"
#include "cfarfp/parallel.hpp"
#include "cfarfp/root_find.hpp"
#include "cfarfp/specfun.hpp"

namespace cfarfp {

namespace {

double lg(double x) { return std::lgamma(x); }

// Gamma(K+1) / (Gamma(K-N+2) Gamma(N-1)): both the central Beta normalization and
// the prefactor of the closed-form segment mass.
double beta_norm(const ProblemDims& dims) {
    return std::exp(lg(dims.k + 1.0) - lg(static_cast<double>(dims.dof_beta_a())) -
                    lg(static_cast<double>(dims.dof_beta_b())));
}

}  // namespace

double prob_exceed(const Boundary& b, const SignalCondition& cond,
                   const ProblemDims& dims, const QuadOptions& opts) {
    if (cond.gamma < 0.0) throw std::invalid_argument("prob_exceed: gamma must be >= 0");
    if (cond.lambda < 0.0 || cond.lambda > 1.0)
        throw std::invalid_argument("prob_exceed: lambda outside [0, 1]");
    const double d2_beta = cond.gamma * (1.0 - cond.lambda);
    const double fac = cond.gamma * cond.lambda;
    auto integrand = [&](double beta) {
        const double f = b.evaluate(beta);
        if (f <= 0.0) return 0.0;  // threshold at or below t = 0: never accepted
        return noncentral_f_cdf(f, fac * beta, dims) *
               noncentral_beta_pdf(beta, d2_beta, dims);
    };
    const auto breaks = b.interior_breaks();
    const double accepted = integrate_panels(integrand, 0.0, 1.0, breaks, opts);
    return std::clamp(1.0 - accepted, 0.0, 1.0);
}

SegmentEval segment_h0_mass(int i, double eps, double m, const SignalCondition& cond,
                            const ProblemDims& dims, int p, const QuadOptions& opts) {
    if (i < 1 || i > p) throw std::invalid_argument("segment_h0_mass: bad index");
    const double lo = static_cast<double>(i - 1) / p;
    const double hi = static_cast<double>(i) / p;
    const double d2_beta = cond.gamma * (1.0 - cond.lambda);
    const double fac = cond.gamma * cond.lambda;
    auto integrand = [&](double beta) {
        const double f = m * beta + eps;
        if (f <= 0.0) return 0.0;
        return noncentral_f_cdf(f, fac * beta, dims) *
               noncentral_beta_pdf(beta, d2_beta, dims);
    };
    return SegmentEval{i, integrate(integrand, lo, hi, opts), cond.gamma, cond.lambda};
}

namespace {

// integral_0^u x^(a-1) (1-x)^(b-1) (1+c*x)^(-g) dx = u^a/a F1(a, 1-b, g, a+1; u, -c*u)
// (Picard's integral representation of the Appell F1, terminating when 1-b is a
// nonpositive integer).
double picard_f1(int a, int one_minus_b, int g, double u, double y) {
    if (u == 0.0) return 0.0;
    return std::pow(u, a) / a *
           appell_f1_poly(static_cast<double>(a), one_minus_b, static_cast<double>(g),
                          a + 1.0, u, y);
}

// J = integral_lo^hi (1 + eps + m x)^-(K-N+1) x^(K-N+1) (1-x)^(N-2) dx, evaluated
// in closed form. Two algebraically equal decompositions exist, anchored at the
// domain endpoints:
//  - at x = 0: J = (1+eps)^-nbar [H(hi) - H(lo)], valid while 1 + eps + m x > 0
//    on [0, hi];
//  - at x = 1 (substituting x -> 1-x): J = sigma^-nbar [G(1-lo) - G(1-hi)] with
//    sigma = 1 + eps + m, valid while the factor stays positive on [lo, 1].
// The terminating Appell sums alternate in sign and cancel catastrophically as
// their first argument approaches 1, so each piece is computed from the anchor
// that keeps the argument <= 1/2; segments straddling the midpoint are split.
struct AnchorForms {
    int nbar, mbar;
    double eps, m;

    bool left_valid() const { return m <= 0.0 || 1.0 + eps > 1e-12; }
    bool right_valid() const { return m >= 0.0 || 1.0 + eps + m > 1e-12; }

    // integral_a^b anchored at 0
    double left(double a, double b) const {
        const double c = m / (1.0 + eps);
        const double scale = std::pow(1.0 + eps, -nbar);
        auto h = [&](double u) { return picard_f1(nbar + 1, -mbar, nbar, u, -c * u); };
        return scale * (h(b) - h(a));
    }

    // integral_a^b anchored at 1
    double right(double a, double b) const {
        const double sigma = 1.0 + eps + m;
        const double c = -m / sigma;
        const double scale = std::pow(sigma, -nbar);
        auto g = [&](double w) { return picard_f1(mbar + 1, -nbar, nbar, w, -c * w); };
        return scale * (g(1.0 - a) - g(1.0 - b));
    }

    double piece(double a, double b, bool prefer_left) const {
        if (prefer_left ? left_valid() : right_valid())
            return prefer_left ? left(a, b) : right(a, b);
        if (prefer_left ? right_valid() : left_valid())
            return prefer_left ? right(a, b) : left(a, b);
        throw InvalidBoundary("segment mass: closed form undefined (vanishing factor)");
    }
};

double closed_core(double lo, double hi, double eps, double m, const ProblemDims& dims) {
    const double at_lo = 1.0 + eps + m * lo;
    const double at_hi = 1.0 + eps + m * hi;
    if (!(at_lo > 0.0) || !(at_hi > 0.0))
        throw InvalidBoundary("segment mass: 1 + f(beta) must stay positive on the segment");
    const AnchorForms forms{dims.dof_f(), dims.n - 2, eps, m};
    if (hi <= 0.5) return forms.piece(lo, hi, /*prefer_left=*/true);
    if (lo >= 0.5) return forms.piece(lo, hi, /*prefer_left=*/false);
    return forms.piece(lo, 0.5, true) + forms.piece(0.5, hi, false);
}

double segment_mass_closed_impl(int i, double eps, double m, const ProblemDims& dims,
                                int p, bool check_nonneg) {
    if (i < 1 || i > p) throw std::invalid_argument("segment mass: bad index");
    const double lo = static_cast<double>(i - 1) / p;
    const double hi = static_cast<double>(i) / p;
    if (check_nonneg) {
        const double scale = std::max(1.0, std::abs(m) + std::abs(eps));
        if (m * lo + eps < -1e-12 * scale || m * hi + eps < -1e-12 * scale)
            throw InvalidBoundary("segment mass: negative threshold on the segment");
    }
    const double dbeta = central_beta_cdf(hi, dims) - central_beta_cdf(lo, dims);
    return dbeta - beta_norm(dims) * closed_core(lo, hi, eps, m, dims);
}

}  // namespace

double segment_h0_mass_closed(int i, double eps, double m, const ProblemDims& dims,
                              int p) {
    return segment_mass_closed_impl(i, eps, m, dims, p, /*check_nonneg=*/true);
}

InvertResult invert_segment_h0_mass(int i, double m, const ProblemDims& dims, int p,
                                    double target) {
    const double lo = static_cast<double>(i - 1) / p;
    const double hi = static_cast<double>(i) / p;
    const double mass = central_beta_cdf(hi, dims) - central_beta_cdf(lo, dims);
    if (target < 0.0 || target > mass)
        return {false, 0.0, "target outside the attainable segment mass range"};

    // Smallest intercept keeping the threshold nonnegative over the segment.
    const double eps_valid = -(m >= 0.0 ? m * lo : m * hi);
    constexpr double eps_cap = 1e3;

    auto r_of = [&](double e) {
        return segment_mass_closed_impl(i, e, m, dims, p, /*check_nonneg=*/false);
    };
    double f_lo = r_of(eps_valid) - target;
    if (f_lo > 1e-15) return {false, 0.0, "target below the valid-boundary range"};
    double f_hi = r_of(eps_cap) - target;
    if (f_hi < 0.0) return {false, 0.0, "intercept beyond cap"};
    if (f_lo >= 0.0) return {true, eps_valid, {}};

    const double eps = brent(
        [&](double e) { return r_of(e) - target; }, eps_valid, eps_cap, f_lo, f_hi,
        RootOptions{1e-15, 1e-13, 300});
    // Polish with a secant step in case brent returned on the x-interval test.
    return {true, eps, {}};
}

double pfa_closed_form(const PiecewiseLinearBoundary& b, const ProblemDims& dims) {
    if (!b.nonnegative())
        throw InvalidBoundary("pfa_closed_form: boundary must be nonnegative on [0, 1]");
    const int k = b.segments();
    double acc = 0.0;
    for (int i = 1; i <= k; ++i)
        acc += segment_mass_closed_impl(i, b.intercept(i - 1), b.slope(i - 1), dims, k,
                                        /*check_nonneg=*/false);
    return std::clamp(1.0 - acc, 0.0, 1.0);
}

MesaGrid mesa(const Boundary& b, std::span<const double> gamma_db,
              std::span<const double> lambda, const ProblemDims& dims, int threads,
              const QuadOptions& opts) {
    if (gamma_db.empty() || lambda.empty())
        throw std::invalid_argument("mesa: empty grid");
    MesaGrid grid;
    grid.gamma_db.assign(gamma_db.begin(), gamma_db.end());
    grid.lambda.assign(lambda.begin(), lambda.end());
    grid.pd.assign(gamma_db.size() * lambda.size(), 0.0);
    const int nl = static_cast<int>(lambda.size());
    parallel_for(static_cast<int>(grid.pd.size()), threads, [&](int cell) {
        const int gi = cell / nl;
        const int li = cell % nl;
        const SignalCondition cond{std::pow(10.0, grid.gamma_db[gi] / 10.0),
                                   grid.lambda[li]};
        grid.pd[cell] = prob_exceed(b, cond, dims, opts);
    });
    return grid;
}

std::vector<double> iso_pd_contour(const MesaGrid& grid, double pd_level) {
    if (!(pd_level > 0.0 && pd_level < 1.0))
        throw std::invalid_argument("iso_pd_contour: level must lie in (0, 1)");
    const int ng = static_cast<int>(grid.gamma_db.size());
    const int nl = static_cast<int>(grid.lambda.size());
    std::vector<double> contour(nl, std::numeric_limits<double>::quiet_NaN());
    for (int li = 0; li < nl; ++li) {
        for (int gi = 1; gi < ng; ++gi) {
            const double p0 = grid.at(gi - 1, li);
            const double p1 = grid.at(gi, li);
            if (p0 < pd_level && p1 >= pd_level) {  // first upward crossing
                const double w = (pd_level - p0) / (p1 - p0);
                contour[li] = grid.gamma_db[gi - 1] +
                              w * (grid.gamma_db[gi] - grid.gamma_db[gi - 1]);
                break;
            }
        }
    }
    return contour;
}

std::optional<AbiResult> abi(const MesaGrid& a, const MesaGrid& ref, double pd_level) {
    if (a.gamma_db != ref.gamma_db || a.lambda != ref.lambda)
        throw std::invalid_argument("abi: grids must be identical");
    const auto ca = iso_pd_contour(a, pd_level);
    const auto cr = iso_pd_contour(ref, pd_level);
    const int nl = static_cast<int>(a.lambda.size());
    // Trapezoid over the lambda range where both contours exist.
    double area = 0.0;
    double lo = std::numeric_limits<double>::quiet_NaN();
    double hi = lo;
    bool any = false;
    for (int li = 0; li + 1 < nl; ++li) {
        const bool ok0 = !std::isnan(ca[li]) && !std::isnan(cr[li]);
        const bool ok1 = !std::isnan(ca[li + 1]) && !std::isnan(cr[li + 1]);
        if (ok0 && ok1) {
            const double d0 = std::abs(ca[li] - cr[li]);
            const double d1 = std::abs(ca[li + 1] - cr[li + 1]);
            area += 0.5 * (d0 + d1) * (a.lambda[li + 1] - a.lambda[li]);
            if (!any) lo = a.lambda[li];
            hi = a.lambda[li + 1];
            any = true;
        }
    }
    if (!any) return std::nullopt;
    return AbiResult{area, lo, hi};
}

std::string mesa_to_csv(const MesaGrid& grid) {
    std::string out = "gamma_db";
    char buf[64];
    for (double l : grid.lambda) {
        std::snprintf(buf, sizeof buf, ",%.6g", l);
        out += buf;
    }
    out += '\n';
    for (size_t gi = 0; gi < grid.gamma_db.size(); ++gi) {
        std::snprintf(buf, sizeof buf, "%.6g", grid.gamma_db[gi]);
        out += buf;
        for (size_t li = 0; li < grid.lambda.size(); ++li) {
            std::snprintf(buf, sizeof buf, ",%.6g", grid.pd[gi * grid.lambda.size() + li]);
            out += buf;
        }
        out += '\n';
    }
    return out;
}

}  // namespace cfarfp

#include "cfarfp/designer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cfarfp/errors.hpp"
#include "cfarfp/parallel.hpp"
#include "cfarfp/root_find.hpp"

namespace cfarfp {

WeightingMode weighting_from_string(const std::string& name) {
    if (name == "spread") return WeightingMode::spread_scaled;
    if (name == "uniform") return WeightingMode::uniform;
    if (name == "relative") return WeightingMode::relative;
    if (name == "mismatch") return WeightingMode::mismatch_weighted;
    if (name == "normalized-spread") return WeightingMode::normalized_spread;
    throw std::invalid_argument("unknown weighting mode: " + name);
}

const char* to_string(WeightingMode mode) {
    switch (mode) {
        case WeightingMode::spread_scaled: return "spread";
        case WeightingMode::uniform: return "uniform";
        case WeightingMode::relative: return "relative";
        case WeightingMode::mismatch_weighted: return "mismatch";
        case WeightingMode::normalized_spread: return "normalized-spread";
    }
    return "unknown";
}

std::vector<Specification> sample_specifications(const Boundary& d, int s_count,
                                                 std::span<const double> gamma_db,
                                                 std::span<const double> lambda,
                                                 const ProblemDims& dims, int threads) {
    if (gamma_db.empty() || lambda.empty())
        throw std::invalid_argument("sample_specifications: empty grid");
    if (s_count != static_cast<int>(gamma_db.size() * lambda.size()))
        throw std::invalid_argument(
            "sample_specifications: s_count must equal the grid-size product");
    std::vector<Specification> specs(s_count);
    const int nl = static_cast<int>(lambda.size());
    parallel_for(s_count, threads, [&](int idx) {
        const double g_db = gamma_db[idx / nl];
        const double l = lambda[idx % nl];
        const SignalCondition cond{std::pow(10.0, g_db / 10.0), l};
        specs[idx] = Specification{g_db, l, prob_exceed(d, cond, dims)};
    });
    return specs;
}

LineFit fit_segment_line(const Boundary& d, double lo, double hi) {
    if (!(hi > lo)) throw std::invalid_argument("fit_segment_line: empty interval");
    constexpr int kSamples = 64;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int s = 0; s < kSamples; ++s) {
        const double x = lo + (hi - lo) * s / (kSamples - 1.0);
        const double y = d.evaluate(x);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = kSamples;
    const double denom = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / denom;
    return LineFit{slope, (sy - slope * sx) / n};
}

namespace {

double cost_from_errors(std::span<const double> errors,
                        std::span<const Specification> specs, WeightingMode mode,
                        double mismatch_exponent) {
    const int s = static_cast<int>(errors.size());
    if (s == 1 && (mode == WeightingMode::spread_scaled ||
                   mode == WeightingMode::normalized_spread)) {
        static bool warned = false;
        if (!warned) {
            std::fprintf(stderr,
                         "warning: spread-based cost degenerates for a single "
                         "specification; using uniform weights\n");
            warned = true;
        }
        mode = WeightingMode::uniform;
    }
    double total = 0.0;
    for (double e : errors) total += e;
    switch (mode) {
        case WeightingMode::uniform:
            return total;
        case WeightingMode::relative: {
            double acc = 0.0;
            for (int i = 0; i < s; ++i)
                acc += errors[i] / std::max(specs[i].psi * specs[i].psi, 1e-24);
            return acc;
        }
        case WeightingMode::mismatch_weighted: {
            double acc = 0.0;
            for (int i = 0; i < s; ++i)
                acc += std::pow(specs[i].lambda, mismatch_exponent) * errors[i];
            return acc;
        }
        case WeightingMode::spread_scaled:
        case WeightingMode::normalized_spread: {
            const double mean = total / s;
            double sq = 0.0;
            for (double e : errors) sq += (e - mean) * (e - mean);
            if (mode == WeightingMode::spread_scaled) return total * std::sqrt(sq);
            return total * std::sqrt(sq / (s - 1)) / s;
        }
    }
    return total;
}

std::vector<double> candidate_errors(const PiecewiseLinearBoundary& b,
                                     std::span<const Specification> specs,
                                     const ProblemDims& dims, int threads) {
    std::vector<double> errors(specs.size());
    parallel_for(static_cast<int>(specs.size()), threads, [&](int i) {
        const SignalCondition cond{std::pow(10.0, specs[i].gamma_db / 10.0),
                                   specs[i].lambda};
        const double diff = prob_exceed(b, cond, dims) - specs[i].psi;
        errors[i] = diff * diff;
    });
    return errors;
}

bool segment_nonneg(double m, double eps, double lo, double hi) {
    const double scale = std::max(1.0, std::abs(m) + std::abs(eps));
    return m * lo + eps >= -1e-12 * scale && m * hi + eps >= -1e-12 * scale;
}

// Force bitwise-equal junction values: segment i+1's value at the shared edge is
// rebuilt from the left segment's value there. The intercept alone cannot always
// reach the exact double (its ulp can exceed the target's), so the slope may be
// nudged by a few ulps as well; the perturbation is ~1e-15 relative and far
// inside the constraint tolerance.
void pin_junctions(std::vector<double>& m, std::vector<double>& eps) {
    const int k = static_cast<int>(m.size());
    for (int i = 0; i + 1 < k; ++i) {
        const double x = static_cast<double>(i + 1) / k;
        const double want = m[i] * x + eps[i];
        const double m0 = m[i + 1];
        double best_m = m0, best_e = want - m0 * x;
        double best_gap = std::abs((m0 * x + best_e) - want);
        for (int dm = -8; dm <= 8 && best_gap != 0.0; ++dm) {
            double mc = m0;
            for (int s = 0; s < std::abs(dm); ++s)
                mc = std::nextafter(mc, dm > 0 ? HUGE_VAL : -HUGE_VAL);
            const double u = mc * x;
            double e = want - u;
            for (int it = 0; it < 8 && u + e != want; ++it) e += want - (u + e);
            const double gap = std::abs((mc * x + e) - want);
            if (gap < best_gap) {
                best_gap = gap;
                best_m = mc;
                best_e = e;
            }
        }
        m[i + 1] = best_m;
        eps[i + 1] = best_e;
    }
}

}  // namespace

double design_cost(const PiecewiseLinearBoundary& b, std::span<const Specification> specs,
                   const ProblemDims& dims, WeightingMode mode, double mismatch_exponent,
                   int threads) {
    if (specs.empty()) throw std::invalid_argument("design_cost: no specifications");
    const auto errors = candidate_errors(b, specs, dims, threads);
    return cost_from_errors(errors, specs, mode, mismatch_exponent);
}

DesignResult design_piecewise(const Boundary& d, int p, double pfa_target,
                              std::span<const Specification> specs,
                              const ProblemDims& dims, WeightingMode mode,
                              double mismatch_exponent, int threads) {
    if (p < 2) throw std::invalid_argument("design_piecewise: p must be >= 2");
    if (!(pfa_target > 0.0 && pfa_target < 1.0))
        throw std::invalid_argument("design_piecewise: pfa_target must lie in (0, 1)");
    if (specs.empty()) throw std::invalid_argument("design_piecewise: no specifications");

    // Per-scale least-squares fits and their closed-form segment masses.
    struct ScaleInit {
        std::vector<double> m, eps, r;
        std::vector<std::string> bad;  // per-segment closed-form failure, if any
    };
    std::vector<ScaleInit> init(p + 1);
    for (int k = 2; k <= p; ++k) {
        auto& sc = init[k];
        sc.m.resize(k);
        sc.eps.resize(k);
        sc.r.assign(k, 0.0);
        sc.bad.assign(k, {});
        for (int i = 0; i < k; ++i) {
            const double lo = static_cast<double>(i) / k;
            const double hi = static_cast<double>(i + 1) / k;
            const LineFit fit = fit_segment_line(d, lo, hi);
            sc.m[i] = fit.slope;
            sc.eps[i] = fit.intercept;
            if (!segment_nonneg(fit.slope, fit.intercept, lo, hi)) {
                sc.bad[i] = "fitted segment dips negative";
                continue;
            }
            try {
                sc.r[i] = segment_h0_mass_closed(i + 1, fit.intercept, fit.slope, dims, k);
            } catch (const std::exception& ex) {
                sc.bad[i] = ex.what();
            }
        }
    }

    // Flattened candidate list: (k, i) for k = 2..p, i = 1..k.
    std::vector<std::pair<int, int>> candidates;
    for (int k = 2; k <= p; ++k)
        for (int i = 1; i <= k; ++i) candidates.emplace_back(k, i);

    std::vector<CandidateRecord> log(candidates.size());
    parallel_for(static_cast<int>(candidates.size()), threads, [&](int ci) {
        const auto [k, i] = candidates[ci];
        const auto& sc = init[k];
        CandidateRecord rec;
        rec.k = k;
        rec.i = i;
        for (int j = 0; j < k; ++j) {
            if (j + 1 != i && !sc.bad[j].empty()) {
                rec.note = "segment " + std::to_string(j + 1) + ": " + sc.bad[j];
                log[ci] = rec;
                return;
            }
        }
        double others = 0.0;
        for (int j = 0; j < k; ++j)
            if (j + 1 != i) others += sc.r[j];
        const double target = 1.0 - pfa_target - others;
        const InvertResult inv = invert_segment_h0_mass(i, sc.m[i - 1], dims, k, target);
        if (!inv.feasible) {
            rec.note = inv.reason;
            log[ci] = rec;
            return;
        }
        std::vector<double> eps = sc.eps;
        eps[i - 1] = inv.eps;
        const double lo = static_cast<double>(i - 1) / k;
        const double hi = static_cast<double>(i) / k;
        if (!segment_nonneg(sc.m[i - 1], inv.eps, lo, hi)) {
            rec.note = "retargeted segment dips negative";
            log[ci] = rec;
            return;
        }
        PiecewiseLinearBoundary b(sc.m, eps);
        try {
            const double residual = pfa_closed_form(b, dims) - pfa_target;
            if (std::abs(residual) >= 1e-9) {
                rec.note = "constraint residual too large";
                log[ci] = rec;
                return;
            }
            rec.cost = cost_from_errors(candidate_errors(b, specs, dims, 1), specs, mode,
                                        mismatch_exponent);
        } catch (const std::exception& ex) {
            rec.note = ex.what();
            log[ci] = rec;
            return;
        }
        rec.eps = inv.eps;
        rec.feasible = true;
        log[ci] = rec;
    });

    // Deterministic selection: minimum cost, ties broken by smaller k then i.
    int best = -1;
    for (int ci = 0; ci < static_cast<int>(log.size()); ++ci) {
        if (!log[ci].feasible) continue;
        if (best < 0 || log[ci].cost < log[best].cost) best = ci;
    }
    if (best < 0) throw DesignInfeasible(std::move(log));

    const auto [k, i] = candidates[best];
    std::vector<double> eps = init[k].eps;
    eps[i - 1] = log[best].eps;
    PiecewiseLinearBoundary boundary(init[k].m, std::move(eps));
    const double residual = pfa_closed_form(boundary, dims) - pfa_target;
    return DesignResult{std::move(boundary), k, log[best].cost, residual, false,
                        std::move(log)};
}

DesignResult refine_continuous(const DesignResult& r, double pfa_target,
                               const ProblemDims& dims) {
    const auto& b = r.boundary;
    const int k = b.segments();
    std::vector<double> a(k + 1);
    a[0] = b.intercept(0);
    a[k] = b.slope(k - 1) + b.intercept(k - 1);
    for (int i = 1; i < k; ++i) {
        const double x = static_cast<double>(i) / k;
        a[i] = 0.5 * (b.slope(i - 1) * x + b.intercept(i - 1) + b.slope(i) * x +
                      b.intercept(i));
    }
    std::vector<double> m(k), eps(k);
    for (int i = 1; i <= k; ++i) {
        m[i - 1] = k * (a[i] - a[i - 1]);
        eps[i - 1] = i * a[i - 1] - (i - 1) * a[i];
    }

    // Vertical shift restoring the constraint; the shifted boundary can dip
    // negative during bracket expansion, in which case that direction is closed.
    auto residual_at = [&](double s) {
        PiecewiseLinearBoundary cand(m, eps);
        return pfa_closed_form(cand.shifted(s), dims) - pfa_target;
    };
    const double r0 = residual_at(0.0);
    double shift = 0.0;
    if (r0 != 0.0) {
        // Pfa decreases as the curve moves up: positive residual needs s > 0.
        const double dir = r0 > 0.0 ? 1.0 : -1.0;
        double step = 1e-3;
        double prev = 0.0, prev_res = r0;
        bool bracketed = false;
        double s_end = 0.0, res_end = 0.0;
        while (step < 64.0) {
            const double s = dir * step;
            double res;
            try {
                res = residual_at(s);
            } catch (const InvalidBoundary&) {
                break;  // moved below zero; no root in this direction
            }
            if ((res > 0.0) != (prev_res > 0.0)) {
                bracketed = true;
                s_end = s;
                res_end = res;
                break;
            }
            prev = s;
            prev_res = res;
            step *= 4.0;
        }
        if (!bracketed)
            throw std::runtime_error("refine_continuous: shift bracket failure");
        shift = brent([&](double s) { return residual_at(s); }, prev, s_end, prev_res,
                      res_end, RootOptions{1e-16, 1e-13, 300});
    }
    for (double& e : eps) e += shift;
    pin_junctions(m, eps);

    PiecewiseLinearBoundary refined(std::move(m), std::move(eps));
    const double residual = pfa_closed_form(refined, dims) - pfa_target;
    return DesignResult{std::move(refined), k, r.cost, residual, true, r.log};
}

TabulatedBoundary shift_to_pfa(const Boundary& d, double pfa_target,
                               const ProblemDims& dims) {
    if (!(pfa_target > 0.0 && pfa_target < 1.0))
        throw std::invalid_argument("shift_to_pfa: pfa_target must lie in (0, 1)");
    // Tabulate once (breaks preserved), then solve for the vertical offset of the
    // sampled values so the assertion holds on the returned object itself.
    const auto breaks = d.interior_breaks();
    std::vector<BoundaryPart> parts;
    double lo = 0.0;
    for (double e : breaks) {
        parts.push_back(BoundaryPart{&d, lo, e});
        lo = e;
    }
    parts.push_back(BoundaryPart{&d, lo, 1.0});
    const int per_part = std::max(32, 1024 / static_cast<int>(parts.size()));
    TabulatedBoundary table = juxtapose(parts, per_part);

    const SignalCondition h0{0.0, 1.0};
    auto residual_at = [&](double c) {
        return prob_exceed(table.shifted(c), h0, dims) - pfa_target;
    };
    const double r0 = residual_at(0.0);
    if (std::abs(r0) <= 1e-9) return table;

    const double dir = r0 > 0.0 ? 1.0 : -1.0;  // raise the curve to lower the Pfa
    double step = 1e-3;
    double prev = 0.0, prev_res = r0;
    double s_end = 0.0, res_end = 0.0;
    bool bracketed = false;
    while (step < 1e6) {
        const double s = dir * step;
        const double res = residual_at(s);
        if ((res > 0.0) != (prev_res > 0.0)) {
            bracketed = true;
            s_end = s;
            res_end = res;
            break;
        }
        prev = s;
        prev_res = res;
        step *= 4.0;
    }
    if (!bracketed) throw std::runtime_error("shift_to_pfa: bracket failure");
    const double c = brent([&](double s) { return residual_at(s); }, prev, s_end,
                           prev_res, res_end, RootOptions{1e-15, 1e-10, 300});
    return table.shifted(c);
}

}  // namespace cfarfp

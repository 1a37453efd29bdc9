#include "cfarfp/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cfarfp/parallel.hpp"
#include "cfarfp/rng.hpp"

namespace cfarfp {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double sigma_f_for_one_lag(double rho) {
    if (!(rho > 0.0 && rho < 1.0))
        throw std::invalid_argument("sigma_f_for_one_lag: rho must lie in (0, 1)");
    return std::sqrt(-std::log(rho) / (2.0 * M_PI * M_PI));
}

HermitianMatrix clutter_covariance(const ClutterModel& cm, int n) {
    if (!(cm.sigma_f > 0.0))
        throw std::invalid_argument("clutter_covariance: sigma_f must be > 0");
    if (!(cm.noise_power > 0.0))
        throw std::invalid_argument("clutter_covariance: noise_power must be > 0");
    HermitianMatrix c(n);
    const double a = 2.0 * M_PI * M_PI * cm.sigma_f * cm.sigma_f;
    for (int r = 0; r < n; ++r)
        for (int col = 0; col <= r; ++col) {
            const double d = r - col;
            double v = std::exp(-a * d * d);
            if (r == col) v += cm.noise_power;
            c.set(r, col, v);
        }
    return c;
}

ComplexVec steering_vector(int n, double fd) {
    ComplexVec v(n);
    for (int i = 0; i < n; ++i) {
        const double phase = kTwoPi * fd * i;
        v[i] = cxd{std::cos(phase), std::sin(phase)};
    }
    return v;
}

double solve_doppler_offset(const SteeringModel& base, const HermitianMatrix& c,
                            double target_lambda) {
    if (!(target_lambda > 0.0 && target_lambda <= 1.0))
        throw std::invalid_argument("solve_doppler_offset: target must lie in (0, 1]");
    if (target_lambda == 1.0) return 0.0;
    const CholeskyFactor chol = cholesky(c);
    const ComplexVec v = base.nominal();
    auto mismatch = [&](double df) {
        return cos_squared_angle(steering_vector(base.n, base.f_d + df), v, chol);
    };
    // Scan toward the first null; stop if the curve turns back up before
    // crossing the target (then the target is unreachable on this branch).
    const double step = 1.0 / (64.0 * base.n);
    double prev_df = 0.0;
    double prev = 1.0;
    for (double df = step; df < 0.5; df += step) {
        const double cur = mismatch(df);
        if (cur <= target_lambda) {
            // Bisection to 1e-6 on the mismatch value.
            double lo = prev_df, hi = df;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double val = mismatch(mid);
                if (std::abs(val - target_lambda) < 1e-6 * 0.5) return mid;
                (val > target_lambda ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
        if (cur > prev)  // passed a local minimum without reaching the target
            throw std::runtime_error(
                "solve_doppler_offset: target unreachable before first local minimum");
        prev = cur;
        prev_df = df;
    }
    throw std::runtime_error("solve_doppler_offset: no crossing found");
}

Scenario::Scenario(const ClutterModel& cm, const SteeringModel& sm,
                   const ProblemDims& dims_)
    : dims(dims_) {
    if (sm.n != dims.n) throw std::invalid_argument("Scenario: steering dimension mismatch");
    const HermitianMatrix c = clutter_covariance(cm, dims.n);
    color = cholesky(c);
    v = sm.nominal();
    p = sm.actual();
    ComplexVec pu = p;
    color.solve_lower_inplace(pu);
    p_quad = dot_conj(pu, pu).real();
}

Scenario Scenario::white(const SteeringModel& sm, const ProblemDims& dims_) {
    Scenario sc(dims_);
    sc.white_noise = true;
    sc.v = steering_vector(dims_.n, sm.f_d);
    sc.p = steering_vector(dims_.n, sm.f_d + sm.delta_f);
    sc.p_quad = dot_conj(sc.p, sc.p).real();
    return sc;
}

namespace {

void draw_vector(const Scenario& sc, TrialRng& rng, ComplexVec& out) {
    const int n = sc.dims.n;
    for (int i = 0; i < n; ++i) out[i] = rng.std_cnormal();
    if (sc.white_noise) return;
    // Color: out <- L * out (in place, bottom-up).
    for (int r = n - 1; r >= 0; --r) {
        cxd acc{0.0, 0.0};
        for (int c = 0; c <= r; ++c) acc += sc.color.entry(r, c) * out[c];
        out[r] = acc;
    }
}

}  // namespace

FeaturePoint simulate_trial(const Scenario& sc, const SignalCondition& cond,
                            uint64_t seed, long trial_index) {
    TrialRng rng(seed, static_cast<uint64_t>(trial_index));
    const int n = sc.dims.n;
    const int k = sc.dims.k;
    HermitianMatrix s(n);
    ComplexVec buf(n);
    for (int t = 0; t < k; ++t) {
        draw_vector(sc, rng, buf);
        s.add_outer(buf);
    }
    draw_vector(sc, rng, buf);
    if (cond.gamma > 0.0) {
        const double mag = std::sqrt(cond.gamma / sc.p_quad);
        const double phase = kTwoPi * rng.uniform();
        const cxd alpha{mag * std::cos(phase), mag * std::sin(phase)};
        for (int i = 0; i < n; ++i) buf[i] += alpha * sc.p[i];
    }
    return feature_map(buf, cholesky(s), sc.v);
}

Estimate estimate_exceed(const Boundary& b, const Scenario& sc,
                         const SignalCondition& cond, const TrialPlan& plan,
                         int threads) {
    if (plan.trials < 1) throw std::invalid_argument("estimate_exceed: trials must be >= 1");
    threads = std::max(1, threads);
    std::vector<long> counts(threads, 0);
    parallel_for(threads, threads, [&](int t) {
        const long lo = plan.trials * t / threads;
        const long hi = plan.trials * (t + 1) / threads;
        long hits = 0;
        for (long i = lo; i < hi; ++i) {
            const FeaturePoint fp = simulate_trial(sc, cond, plan.seed, i);
            if (decide(b, fp) == Decision::H1) ++hits;
        }
        counts[t] = hits;
    });
    const long hits = std::accumulate(counts.begin(), counts.end(), 0L);
    const double est = static_cast<double>(hits) / plan.trials;
    const double se = std::sqrt(std::max(est * (1.0 - est), 0.0) / plan.trials);
    return Estimate{est, se, plan.trials};
}

Estimate estimate_pfa(const Boundary& b, const TrialPlan& plan, int threads) {
    const Scenario sc = Scenario::white(SteeringModel{plan.dims.n, 0.08, 0.0}, plan.dims);
    return estimate_exceed(b, sc, SignalCondition{0.0, 1.0}, plan, threads);
}

Estimate estimate_pfa(const Boundary& b, const Scenario& sc, const TrialPlan& plan,
                      int threads) {
    return estimate_exceed(b, sc, SignalCondition{0.0, 1.0}, plan, threads);
}

Estimate estimate_pd(const Boundary& b, const Scenario& sc, const SignalCondition& cond,
                     const TrialPlan& plan, int threads) {
    return estimate_exceed(b, sc, cond, plan, threads);
}

CalibrationRecord calibrate_threshold(const BaselineDetector& d, double pfa_target,
                                      const TrialPlan& plan, int threads) {
    if (!(pfa_target > 0.0 && pfa_target <= 1.0))
        throw std::invalid_argument("calibrate_threshold: pfa must lie in (0, 1]");
    const Scenario sc = Scenario::white(SteeringModel{plan.dims.n, 0.08, 0.0}, plan.dims);
    std::vector<double> stats(plan.trials);
    parallel_for(static_cast<int>(plan.trials), threads, [&](int i) {
        TrialRng rng(plan.seed, static_cast<uint64_t>(i));
        const int n = sc.dims.n;
        HermitianMatrix s(n);
        ComplexVec buf(n);
        for (int t = 0; t < sc.dims.k; ++t) {
            draw_vector(sc, rng, buf);
            s.add_outer(buf);
        }
        draw_vector(sc, rng, buf);
        stats[i] = raw_statistic(d, buf, cholesky(s), sc.v);
    });
    long rank = static_cast<long>(std::ceil(plan.trials * pfa_target));
    rank = std::clamp(rank, 1L, plan.trials);
    std::nth_element(stats.begin(), stats.begin() + (rank - 1), stats.end(),
                     std::greater<double>());
    CalibrationRecord rec;
    rec.detector = to_string(d.kind);
    rec.pfa = pfa_target;
    rec.eta = stats[rank - 1];
    rec.trials = plan.trials;
    rec.seed = plan.seed;
    rec.low_trials = plan.trials < static_cast<long>(10.0 / pfa_target);
    return rec;
}

std::vector<LabeledCloud> cluster_scatter(const TrialPlan& plan, const ClutterModel& cm,
                                          const SteeringModel& sm,
                                          std::span<const ScatterCondition> conditions,
                                          int threads) {
    std::vector<LabeledCloud> clouds;
    const HermitianMatrix c = clutter_covariance(cm, sm.n);
    for (size_t ci = 0; ci < conditions.size(); ++ci) {
        const auto& sc_cond = conditions[ci];
        const bool h0 = sc_cond.gamma_db <= -300.0;
        SteeringModel actual = sm;
        if (!h0 && sc_cond.lambda < 1.0)
            actual.delta_f = solve_doppler_offset(sm, c, sc_cond.lambda);
        const Scenario scen(cm, actual, plan.dims);
        const SignalCondition cond{h0 ? 0.0 : std::pow(10.0, sc_cond.gamma_db / 10.0),
                                   sc_cond.lambda};
        LabeledCloud cloud{sc_cond.label, cond, std::vector<FeaturePoint>(plan.trials)};
        const uint64_t stream_base = static_cast<uint64_t>(ci) * plan.trials;
        parallel_for(static_cast<int>(plan.trials), threads, [&](int i) {
            cloud.points[i] = simulate_trial(scen, cond, plan.seed, stream_base + i);
        });
        clouds.push_back(std::move(cloud));
    }
    return clouds;
}

}  // namespace cfarfp

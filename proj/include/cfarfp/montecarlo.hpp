#pragma once

// Scenario simulation: Gaussian-shaped clutter plus white noise, temporal
// steering vectors with Doppler mismatch, snapshot generation with per-trial
// counter-based randomness, empirical Pfa/Pd, Monte Carlo threshold calibration
// and feature-plane cluster export. Trials are pure functions of
// (seed, trial index), so results are bit-identical for any thread count.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cfarfp/boundary.hpp"
#include "cfarfp/invariant_stats.hpp"

namespace cfarfp {

struct ClutterModel {
    double sigma_f = 0.050977;  // Gaussian clutter spectral spread
    double noise_power = 0.1;   // white-noise level relative to unit clutter diagonal
};

// sigma_f giving a one-lag clutter correlation of rho.
double sigma_f_for_one_lag(double rho);

// C = R_c + noise_power * I with [R_c]_{m1,m2} = exp(-2 pi^2 sigma_f^2 (m1-m2)^2).
HermitianMatrix clutter_covariance(const ClutterModel& cm, int n);

// v = [1, e^{j 2 pi fd}, ..., e^{j 2 pi (n-1) fd}]^T
ComplexVec steering_vector(int n, double fd);

struct SteeringModel {
    int n = 16;
    double f_d = 0.08;     // nominal normalized Doppler
    double delta_f = 0.0;  // offset of the actual steering vector

    ComplexVec nominal() const { return steering_vector(n, f_d); }
    ComplexVec actual() const { return steering_vector(n, f_d + delta_f); }
};

// Smallest delta_f >= 0 with cos_squared_angle(p(delta_f), v, C) = target_lambda
// (to 1e-6). The mismatch decreases from 1 as delta_f grows toward the first
// null; targets below the first local minimum are unreachable and reported.
double solve_doppler_offset(const SteeringModel& base, const HermitianMatrix& c,
                            double target_lambda);

struct TrialPlan {
    uint64_t seed = 0;
    long trials = 1;
    ProblemDims dims;
};

// Precomputed per-scenario state shared across trials.
struct Scenario {
    Scenario(const ClutterModel& cm, const SteeringModel& sm, const ProblemDims& dims);
    // White-noise variant (C = I), permissible for Pfa work by CFARness.
    static Scenario white(const SteeringModel& sm, const ProblemDims& dims);

    ProblemDims dims;
    bool white_noise = false;
    CholeskyFactor color;  // Cholesky factor of C (unused when white)
    ComplexVec v;          // nominal steering
    ComplexVec p;          // actual steering
    double p_quad = 0.0;   // p' C^-1 p, for amplitude calibration

private:
    Scenario(const ProblemDims& d) : dims(d) {}
};

// One Monte Carlo draw: secondaries z_1..z_K and the CUT vector z from CN(0, C);
// under gamma > 0 a target alpha*p is added with |alpha| calibrated so that
// snr(alpha, p, C) equals cond.gamma exactly (phase uniform).
FeaturePoint simulate_trial(const Scenario& sc, const SignalCondition& cond,
                            uint64_t seed, long trial_index);

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    long trials = 0;
};

// Empirical exceedance fraction of the boundary under the given condition.
Estimate estimate_exceed(const Boundary& b, const Scenario& sc,
                         const SignalCondition& cond, const TrialPlan& plan,
                         int threads = 1);

// H0 with white noise by default; pass a clutter scenario to audit CFARness.
Estimate estimate_pfa(const Boundary& b, const TrialPlan& plan, int threads = 1);
Estimate estimate_pfa(const Boundary& b, const Scenario& sc, const TrialPlan& plan,
                      int threads = 1);

Estimate estimate_pd(const Boundary& b, const Scenario& sc, const SignalCondition& cond,
                     const TrialPlan& plan, int threads = 1);

struct CalibrationRecord {
    std::string detector;
    double pfa = 0.0;
    double eta = 0.0;
    long trials = 0;
    uint64_t seed = 0;
    bool low_trials = false;  // fewer than 10/pfa trials
};

// Threshold at the ceil(trials * pfa)-th largest raw statistic over H0 trials.
CalibrationRecord calibrate_threshold(const BaselineDetector& d, double pfa_target,
                                      const TrialPlan& plan, int threads = 1);

struct LabeledCloud {
    std::string label;
    SignalCondition condition;
    std::vector<FeaturePoint> points;
};

struct ScatterCondition {
    std::string label;
    double gamma_db = 0.0;  // -inf encoded as any value <= -300 (H0)
    double lambda = 1.0;
};

// Per-condition feature-point clouds; the Doppler offset for each mismatched
// condition is solved from its lambda.
std::vector<LabeledCloud> cluster_scatter(const TrialPlan& plan, const ClutterModel& cm,
                                          const SteeringModel& sm,
                                          std::span<const ScatterCondition> conditions,
                                          int threads = 1);

}  // namespace cfarfp

#pragma once

// The maximal-invariant feature map (beta, t_tilde) and its statistical laws.
// Conditioned on beta, t_tilde follows a complex noncentral F distribution with
// 1 and K-N+1 complex degrees of freedom and noncentrality gamma*beta*cos2theta;
// beta follows a complex noncentral Beta distribution with K-N+2 and N-1 complex
// degrees of freedom and noncentrality gamma*(1-cos2theta).

#include "cfarfp/complex_linalg.hpp"

namespace cfarfp {

struct FeaturePoint {
    double beta = 1.0;     // in (0, 1]
    double t_tilde = 0.0;  // >= 0
};

struct SignalCondition {
    double gamma = 0.0;   // linear SNR, >= 0
    double lambda = 1.0;  // cos^2 of the steering mismatch angle, in [0, 1]
};

struct ProblemDims {
    int n = 2;  // space-time dimension N
    int k = 2;  // secondary data count K, must be >= n

    ProblemDims(int n_, int k_);
    int dof_f() const { return k - n + 1; }     // conditional F denominator dof
    int dof_beta_a() const { return k - n + 2; }
    int dof_beta_b() const { return n - 1; }
};

// Maps (z, S, v) to the invariant pair:
//   q = |z'S^-1 v|^2 / (v'S^-1 v),  d = 1 + z'S^-1 z - q,  beta = 1/d,  t = q/d.
FeaturePoint feature_map(const ComplexVec& z, const CholeskyFactor& s_chol,
                         const ComplexVec& v);
FeaturePoint feature_map(const ComplexVec& z, const HermitianMatrix& s,
                         const ComplexVec& v);

// |p'C^-1 v|^2 / (p'C^-1 p * v'C^-1 v), in [0, 1].
double cos_squared_angle(const ComplexVec& p, const ComplexVec& v,
                         const CholeskyFactor& c_chol);
double cos_squared_angle(const ComplexVec& p, const ComplexVec& v,
                         const HermitianMatrix& c);

// |alpha|^2 p'C^-1 p.
double snr(cxd alpha, const ComplexVec& p, const HermitianMatrix& c);
double snr(cxd alpha, const ComplexVec& p, const CholeskyFactor& c_chol);

// CDF of t_tilde given beta: complex noncentral F with 1 and K-N+1 complex dof.
// `noncentrality` is gamma*beta*cos2theta; f must be >= 0.
double noncentral_f_cdf(double f, double noncentrality, const ProblemDims& dims);

// Density of beta: complex noncentral Beta, noncentrality gamma*(1-cos2theta).
// Two algebraically equivalent evaluation routes are kept as a cross-check.
enum class BetaPdfRoute { kummer, laguerre };
double noncentral_beta_pdf(double beta, double noncentrality, const ProblemDims& dims,
                           BetaPdfRoute route = BetaPdfRoute::kummer);

// Same density written as the finite exponential series over the noncentrality
// order (a third independent evaluation route).
double noncentral_beta_pdf_series(double beta, double noncentrality,
                                  const ProblemDims& dims);

// CDF of beta under H0 (central case): I_x(K-N+2, N-1).
double central_beta_cdf(double x, const ProblemDims& dims);

}  // namespace cfarfp

#pragma once

// Semi-analytic detector performance. P(t > f(beta)) under any (gamma, cos2theta)
// is evaluated by adaptive quadrature of the conditional-F CDF against the
// noncentral Beta density; under H0 the per-segment masses of piecewise-linear
// boundaries additionally have a closed form through the terminating Appell F1,
// which is what makes exact Pfa-constrained design possible.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cfarfp/boundary.hpp"
#include "cfarfp/invariant_stats.hpp"
#include "cfarfp/quadrature.hpp"

namespace cfarfp {

// P(t > f(beta) | gamma, lambda). The conditional noncentrality gamma*lambda*beta
// varies along the integration axis. Negative threshold values contribute CDF 0
// (a point below t = 0 is always exceeded).
double prob_exceed(const Boundary& b, const SignalCondition& cond,
                   const ProblemDims& dims, const QuadOptions& opts = {});

struct SegmentEval {
    int index = 0;        // 1-based segment index
    double r_value = 0.0; // P(decide H0 and beta in segment) under the condition
    double gamma = 0.0;
    double lambda = 1.0;
};

// Quadrature evaluation of the segment mass r_i for the line m*beta + eps over
// [(i-1)/p, i/p].
SegmentEval segment_h0_mass(int i, double eps, double m, const SignalCondition& cond,
                            const ProblemDims& dims, int p, const QuadOptions& opts = {});

// Closed form of the same mass under H0 (gamma = 0). Requires the segment's
// threshold to be nonnegative; throws InvalidBoundary otherwise.
double segment_h0_mass_closed(int i, double eps, double m, const ProblemDims& dims,
                              int p);

// Retarget the intercept so the closed-form segment mass equals `target`.
struct InvertResult {
    bool feasible = false;
    double eps = 0.0;
    std::string reason;  // set when infeasible
};
InvertResult invert_segment_h0_mass(int i, double m, const ProblemDims& dims, int p,
                                    double target);

// Pfa of a piecewise-linear boundary: 1 - sum of closed-form segment masses.
double pfa_closed_form(const PiecewiseLinearBoundary& b, const ProblemDims& dims);

// ---------------------------------------------------------------------------
// Mesa grids and the area-between-iso-Pd-curves metric.
// ---------------------------------------------------------------------------
struct MesaGrid {
    std::vector<double> gamma_db;  // ascending
    std::vector<double> lambda;    // ascending
    std::vector<double> pd;        // row-major [gamma][lambda]

    double at(int gi, int li) const { return pd[static_cast<size_t>(gi) * lambda.size() + li]; }
};

MesaGrid mesa(const Boundary& b, std::span<const double> gamma_db,
              std::span<const double> lambda, const ProblemDims& dims, int threads = 1,
              const QuadOptions& opts = {});

// Iso-Pd contour gamma(lambda) extracted per lambda column by the first upward
// crossing (linear interpolation along the gamma axis). Entries without a
// crossing are NaN.
std::vector<double> iso_pd_contour(const MesaGrid& grid, double pd_level);

struct AbiResult {
    double area = 0.0;       // integral of |gamma_a - gamma_ref| d lambda, gamma in dB
    double lambda_lo = 0.0;  // lambda range actually used
    double lambda_hi = 0.0;
};

// Area between the iso-Pd contours of two detectors evaluated on identical
// grids; std::nullopt when a common contour range does not exist.
std::optional<AbiResult> abi(const MesaGrid& a, const MesaGrid& ref, double pd_level);

// CSV export: header row of lambda values, first column gamma_dB, 6 significant
// digits.
std::string mesa_to_csv(const MesaGrid& grid);

}  // namespace cfarfp

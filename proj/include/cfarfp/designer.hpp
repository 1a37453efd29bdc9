#pragma once

// Pfa-constrained boundary design. The search sweeps piecewise-linear
// approximations of a desired curve from coarse (k = 2) to fine (k = p) scale;
// for each scale it retargets one intercept at a time so the closed-form Pfa
// constraint holds exactly, and keeps the feasible candidate of minimum cost.
// A refinement stage joins adjacent segments at their junction midpoints and
// restores the Pfa with a uniform vertical shift.

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfarfp/boundary.hpp"
#include "cfarfp/performance.hpp"

namespace cfarfp {

struct Specification {
    double gamma_db = 0.0;  // SNR in dB
    double lambda = 1.0;    // cos^2 mismatch
    double psi = 0.0;       // desired detection probability at (gamma, lambda)
};

enum class WeightingMode {
    spread_scaled,     // error sum scaled by the error spread (the default cost)
    uniform,           // plain least squares, w = 1
    relative,          // w = 1/psi^2
    mismatch_weighted, // w = lambda^a
    normalized_spread, // spread scaled with the 1/S and 1/(S-1) normalizations
};

WeightingMode weighting_from_string(const std::string& name);
const char* to_string(WeightingMode mode);

struct CandidateRecord {
    int k = 0;        // segment count of this candidate
    int i = 0;        // 1-based index of the retargeted segment
    double eps = 0.0; // retargeted intercept (when feasible)
    bool feasible = false;
    double cost = 0.0;
    std::string note; // reason when infeasible
};

struct DesignResult {
    PiecewiseLinearBoundary boundary;
    int k_star = 0;
    double cost = 0.0;
    double pfa_residual = 0.0;
    bool continuous = false;
    std::vector<CandidateRecord> log;
};

struct DesignInfeasible : std::runtime_error {
    explicit DesignInfeasible(std::vector<CandidateRecord> records)
        : std::runtime_error("design: no feasible candidate"), log(std::move(records)) {}
    std::vector<CandidateRecord> log;
};

// psi_i = P(t > d(beta) | gamma_i, lambda_i) for every grid pair; s_count must
// equal the product of the grid sizes.
std::vector<Specification> sample_specifications(const Boundary& d, int s_count,
                                                 std::span<const double> gamma_db,
                                                 std::span<const double> lambda,
                                                 const ProblemDims& dims,
                                                 int threads = 1);

// Least-squares line fit of d over [lo, hi], sampled on 64 uniform points.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};
LineFit fit_segment_line(const Boundary& d, double lo, double hi);

// Weighted squared-deviation cost of a candidate boundary against the
// specifications. With a single specification the spread-based modes degenerate
// to zero for every candidate and fall back to uniform (with a warning).
double design_cost(const PiecewiseLinearBoundary& b, std::span<const Specification> specs,
                   const ProblemDims& dims, WeightingMode mode = WeightingMode::spread_scaled,
                   double mismatch_exponent = 1.0, int threads = 1);

// The coarse-to-fine search; examines p(p+1)/2 - 1 candidates and logs all of
// them. Throws DesignInfeasible when none satisfies the constraint.
DesignResult design_piecewise(const Boundary& d, int p, double pfa_target,
                              std::span<const Specification> specs,
                              const ProblemDims& dims,
                              WeightingMode mode = WeightingMode::spread_scaled,
                              double mismatch_exponent = 1.0, int threads = 1);

// Continuity refinement: junction midpoints, endpoint values pinned, then a
// uniform vertical shift restoring the Pfa to 1e-9. Junction values of the
// output agree exactly.
DesignResult refine_continuous(const DesignResult& r, double pfa_target,
                               const ProblemDims& dims);

// The plain competitor: d + c with the scalar c solved so the curve works at the
// preassigned Pfa.
TabulatedBoundary shift_to_pfa(const Boundary& d, double pfa_target,
                               const ProblemDims& dims);

}  // namespace cfarfp

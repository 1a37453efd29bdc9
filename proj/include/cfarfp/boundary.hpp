#pragma once

// Decision region boundaries t_tilde = f(beta) over [0, 1]: the piecewise-linear
// family used by the designer, tabulated curves (carriers for desired/juxtaposed
// boundaries), interpolating and regression B-splines, and the classical
// baseline detectors in both raw-statistic and feature-plane form.

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cfarfp/invariant_stats.hpp"

namespace cfarfp {

enum class Decision { H0, H1 };

class Boundary {
public:
    virtual ~Boundary() = default;

    // Threshold value f(beta) for beta in [0, 1].
    virtual double evaluate(double beta) const = 0;

    // Interior abscissae where f may be discontinuous or non-smooth; quadrature
    // panels are aligned with these.
    virtual std::vector<double> interior_breaks() const { return {}; }

    virtual std::unique_ptr<Boundary> clone() const = 0;
};

// H1 iff t_tilde strictly exceeds the boundary; ties go to H0.
Decision decide(const Boundary& b, const FeaturePoint& fp);

// ---------------------------------------------------------------------------
// Piecewise-linear boundary on the uniform partition of [0, 1]: segment i
// (0-based) covers [i/k, (i+1)/k) and evaluates to m[i]*beta + eps[i].
// ---------------------------------------------------------------------------
class PiecewiseLinearBoundary final : public Boundary {
public:
    PiecewiseLinearBoundary(std::vector<double> slopes, std::vector<double> intercepts);

    static PiecewiseLinearBoundary constant(double level);

    int segments() const { return static_cast<int>(m_.size()); }
    double slope(int i) const { return m_[i]; }
    double intercept(int i) const { return eps_[i]; }
    const std::vector<double>& slopes() const { return m_; }
    const std::vector<double>& intercepts() const { return eps_; }

    // Left-closed segment lookup: beta = i/k belongs to segment i; beta = 1 maps
    // to the last segment.
    int segment_index(double beta) const;

    // Runtime decision rule: locate the segment, then test t against its line.
    Decision decide(const FeaturePoint& fp) const;

    // f >= 0 everywhere on [0, 1] (up to a tiny slack for roundoff).
    bool nonnegative() const;

    // Adds a constant to every intercept.
    PiecewiseLinearBoundary shifted(double delta) const;

    double evaluate(double beta) const override;
    std::vector<double> interior_breaks() const override;
    std::unique_ptr<Boundary> clone() const override {
        return std::make_unique<PiecewiseLinearBoundary>(*this);
    }

private:
    std::vector<double> m_;
    std::vector<double> eps_;
};

// ---------------------------------------------------------------------------
// Tabulated boundary: samples on a strictly increasing beta grid, evaluated by
// local piecewise-cubic (4-point Lagrange) interpolation. Optional break points
// split the grid into blocks so interpolation never crosses a discontinuity.
// ---------------------------------------------------------------------------
class TabulatedBoundary final : public Boundary {
public:
    TabulatedBoundary(std::vector<double> beta, std::vector<double> t,
                      std::vector<double> breaks = {});

    const std::vector<double>& grid() const { return beta_; }
    const std::vector<double>& values() const { return t_; }
    const std::vector<double>& breaks() const { return breaks_; }

    TabulatedBoundary shifted(double delta) const;

    double evaluate(double beta) const override;
    std::vector<double> interior_breaks() const override { return breaks_; }
    std::unique_ptr<Boundary> clone() const override {
        return std::make_unique<TabulatedBoundary>(*this);
    }

private:
    std::pair<int, int> block_range(double beta) const;  // [first, last] sample index

    std::vector<double> beta_;
    std::vector<double> t_;
    std::vector<double> breaks_;  // interior block edges, sorted
};

// ---------------------------------------------------------------------------
// B-spline curve machinery shared by the interpolating and regression splines.
// ---------------------------------------------------------------------------
class BsplineCurve {
public:
    // Clamped B-spline of the given polynomial degree passing through (x, y).
    static BsplineCurve interpolate(std::span<const double> x, std::span<const double> y,
                                    int degree);

    // Least-squares fit with num_coef basis functions on a clamped uniform knot
    // vector spanning [x.front(), x.back()].
    static BsplineCurve fit_least_squares(std::span<const double> x,
                                          std::span<const double> y, int degree,
                                          int num_coef);

    double operator()(double x) const;  // clamped to the knot span

    int degree() const { return degree_; }

private:
    int degree_ = 3;
    std::vector<double> knots_;
    std::vector<double> coefs_;
};

// Interpolating spline boundary through the given control points ("order" is the
// polynomial degree of the pieces; with order+1 control points this is the
// single polynomial interpolant).
class SplineBoundary final : public Boundary {
public:
    SplineBoundary(std::vector<std::pair<double, double>> control, int order);

    const std::vector<std::pair<double, double>>& control_points() const {
        return control_;
    }
    int order() const { return order_; }

    double evaluate(double beta) const override;
    std::unique_ptr<Boundary> clone() const override {
        return std::make_unique<SplineBoundary>(*this);
    }

private:
    std::vector<std::pair<double, double>> control_;
    int order_;
    BsplineCurve curve_;
};

// Regression (smoothing) spline boundary: does not generally pass through the
// input points.
class SplineCurveBoundary final : public Boundary {
public:
    explicit SplineCurveBoundary(BsplineCurve curve) : curve_(std::move(curve)) {}

    double evaluate(double beta) const override { return curve_(beta); }
    std::unique_ptr<Boundary> clone() const override {
        return std::make_unique<SplineCurveBoundary>(*this);
    }

private:
    BsplineCurve curve_;
};

SplineCurveBoundary fit_regression_spline(std::span<const std::pair<double, double>> pts,
                                          int order, int num_coef);

// ---------------------------------------------------------------------------
// Baseline detectors.
// ---------------------------------------------------------------------------
struct BaselineDetector {
    enum class Kind { kelly, amf, ace, kalson };

    Kind kind = Kind::kelly;
    double eta = 0.5;           // threshold on the raw statistic
    double kalson_kappa = 0.0;  // in [0, 1]; 0 -> AMF, 1 -> Kelly
};

// Feature-plane form of the baseline's decision region boundary. All four are
// single-segment linear curves:
//   Kelly : f = eta/(1-eta)                     (eta < 1)
//   AMF   : f = eta * beta
//   ACE   : f = eta (1-beta)/(1-eta)            (eta < 1)
//   Kalson: f = eta (kappa + (1-kappa) beta)
PiecewiseLinearBoundary baseline_curve(const BaselineDetector& d);

// The detector's raw decision statistic from the quadratic forms.
double raw_statistic(const BaselineDetector& d, const ComplexVec& z,
                     const CholeskyFactor& s_chol, const ComplexVec& v);

// Feature-plane constant of Kelly's detector at false alarm probability pfa:
// pfa = (1 + c)^-(K-N+1).
double kelly_t_threshold(double pfa, const ProblemDims& dims);

// ---------------------------------------------------------------------------
// Juxtaposition of curves over a partition of [0, 1] (discontinuities allowed).
// ---------------------------------------------------------------------------
struct BoundaryPart {
    const Boundary* curve;
    double lo;
    double hi;
};

TabulatedBoundary juxtapose(std::span<const BoundaryPart> parts,
                            int samples_per_part = 128);

const char* to_string(BaselineDetector::Kind kind);
BaselineDetector::Kind baseline_kind_from_string(const std::string& name);

}  // namespace cfarfp

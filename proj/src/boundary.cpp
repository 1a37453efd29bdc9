#include "cfarfp/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cfarfp/errors.hpp"

namespace cfarfp {

Decision decide(const Boundary& b, const FeaturePoint& fp) {
    return fp.t_tilde > b.evaluate(fp.beta) ? Decision::H1 : Decision::H0;
}

// ---------------------------------------------------------------------------
// PiecewiseLinearBoundary
// ---------------------------------------------------------------------------

PiecewiseLinearBoundary::PiecewiseLinearBoundary(std::vector<double> slopes,
                                                 std::vector<double> intercepts)
    : m_(std::move(slopes)), eps_(std::move(intercepts)) {
    if (m_.empty() || m_.size() != eps_.size())
        throw InvalidBoundary("piecewise-linear: need equal, nonzero slope/intercept counts");
    for (double v : m_)
        if (!std::isfinite(v)) throw InvalidBoundary("piecewise-linear: non-finite slope");
    for (double v : eps_)
        if (!std::isfinite(v)) throw InvalidBoundary("piecewise-linear: non-finite intercept");
}

PiecewiseLinearBoundary PiecewiseLinearBoundary::constant(double level) {
    return PiecewiseLinearBoundary({0.0}, {level});
}

int PiecewiseLinearBoundary::segment_index(double beta) const {
    if (beta < 0.0 || beta > 1.0)
        throw std::domain_error("piecewise-linear: beta outside [0, 1]");
    const int k = segments();
    int i = static_cast<int>(beta * k);
    if (i >= k) i = k - 1;
    // Robust left-closed convention against the representable grid i/k.
    while (i + 1 < k && static_cast<double>(i + 1) / k <= beta) ++i;
    while (i > 0 && static_cast<double>(i) / k > beta) --i;
    return i;
}

Decision PiecewiseLinearBoundary::decide(const FeaturePoint& fp) const {
    const int i = segment_index(fp.beta);
    return fp.t_tilde > m_[i] * fp.beta + eps_[i] ? Decision::H1 : Decision::H0;
}

double PiecewiseLinearBoundary::evaluate(double beta) const {
    const int i = segment_index(beta);
    return m_[i] * beta + eps_[i];
}

std::vector<double> PiecewiseLinearBoundary::interior_breaks() const {
    const int k = segments();
    std::vector<double> edges;
    edges.reserve(k - 1);
    for (int i = 1; i < k; ++i) edges.push_back(static_cast<double>(i) / k);
    return edges;
}

bool PiecewiseLinearBoundary::nonnegative() const {
    const int k = segments();
    for (int i = 0; i < k; ++i) {
        const double lo = static_cast<double>(i) / k;
        const double hi = static_cast<double>(i + 1) / k;
        const double scale = std::max(1.0, std::abs(m_[i]) + std::abs(eps_[i]));
        if (m_[i] * lo + eps_[i] < -1e-12 * scale) return false;
        if (m_[i] * hi + eps_[i] < -1e-12 * scale) return false;
    }
    return true;
}

PiecewiseLinearBoundary PiecewiseLinearBoundary::shifted(double delta) const {
    std::vector<double> eps = eps_;
    for (double& e : eps) e += delta;
    return PiecewiseLinearBoundary(m_, std::move(eps));
}

// ---------------------------------------------------------------------------
// TabulatedBoundary
// ---------------------------------------------------------------------------

TabulatedBoundary::TabulatedBoundary(std::vector<double> beta, std::vector<double> t,
                                     std::vector<double> breaks)
    : beta_(std::move(beta)), t_(std::move(t)), breaks_(std::move(breaks)) {
    if (beta_.size() < 2 || beta_.size() != t_.size())
        throw InvalidBoundary("tabulated: need >= 2 samples with matching values");
    for (size_t i = 1; i < beta_.size(); ++i)
        if (!(beta_[i] > beta_[i - 1]))
            throw InvalidBoundary("tabulated: grid must be strictly increasing");
    for (double b : breaks_)
        if (b <= beta_.front() || b >= beta_.back())
            throw InvalidBoundary("tabulated: break outside the grid span");
}

TabulatedBoundary TabulatedBoundary::shifted(double delta) const {
    std::vector<double> t = t_;
    for (double& v : t) v += delta;
    return TabulatedBoundary(beta_, std::move(t), breaks_);
}

std::pair<int, int> TabulatedBoundary::block_range(double beta) const {
    double lo = beta_.front();
    double hi = beta_.back();
    for (double b : breaks_) {
        if (beta < b)
            hi = std::min(hi, b);
        else
            lo = std::max(lo, b);  // breaks are left-closed toward the right block
    }
    int first = static_cast<int>(std::lower_bound(beta_.begin(), beta_.end(), lo) -
                                 beta_.begin());
    int last = static_cast<int>(std::upper_bound(beta_.begin(), beta_.end(), hi) -
                                beta_.begin()) - 1;
    // A break splits left-closed: samples exactly at `lo` belong here, samples at
    // `hi` belong to the next block (unless hi is the global end).
    if (hi != beta_.back() && last >= 0 && beta_[last] == hi) --last;
    if (last < first) last = first;
    return {first, last};
}

double TabulatedBoundary::evaluate(double beta) const {
    if (beta < 0.0 || beta > 1.0)
        throw std::domain_error("tabulated: beta outside [0, 1]");
    const double x = std::clamp(beta, beta_.front(), beta_.back());
    auto [first, last] = block_range(x);
    if (first == last) return t_[first];

    int i = static_cast<int>(std::upper_bound(beta_.begin() + first,
                                              beta_.begin() + last + 1, x) -
                             beta_.begin()) - 1;
    i = std::clamp(i, first, last - 1);

    // 4-point Lagrange stencil clamped to the block.
    int s0 = std::max(first, i - 1);
    int s1 = std::min(last, s0 + 3);
    s0 = std::max(first, s1 - 3);

    double acc = 0.0;
    for (int j = s0; j <= s1; ++j) {
        double w = 1.0;
        for (int l = s0; l <= s1; ++l)
            if (l != j) w *= (x - beta_[l]) / (beta_[j] - beta_[l]);
        acc += w * t_[j];
    }
    return acc;
}

// ---------------------------------------------------------------------------
// B-splines
// ---------------------------------------------------------------------------

namespace {

// Dense Gaussian elimination with partial pivoting (tiny systems only).
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b, int n) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
        if (a[piv * n + col] == 0.0)
            throw std::runtime_error("solve_dense: singular system");
        if (piv != col) {
            for (int c = 0; c < n; ++c) std::swap(a[piv * n + c], a[col * n + c]);
            std::swap(b[piv], b[col]);
        }
        const double d = a[col * n + col];
        for (int r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] / d;
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (int r = n - 1; r >= 0; --r) {
        double acc = b[r];
        for (int c = r + 1; c < n; ++c) acc -= a[r * n + c] * x[c];
        x[r] = acc / a[r * n + r];
    }
    return x;
}

int find_span(const std::vector<double>& knots, int num_coef, int degree, double x) {
    int lo = degree;
    int hi = num_coef;  // knots[num_coef] is the start of the clamped tail
    if (x >= knots[hi]) return hi - 1;
    if (x <= knots[lo]) return lo;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        (x < knots[mid] ? hi : lo) = mid;
    }
    return lo;
}

// Nonzero basis functions N_{span-degree..span} at x (Cox-de Boor).
void basis_funs(const std::vector<double>& knots, int span, int degree, double x,
                double* out) {
    std::vector<double> left(degree + 1), right(degree + 1);
    out[0] = 1.0;
    for (int j = 1; j <= degree; ++j) {
        left[j] = x - knots[span + 1 - j];
        right[j] = knots[span + j] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            const double tmp = out[r] / (right[r + 1] + left[j - r]);
            out[r] = saved + right[r + 1] * tmp;
            saved = left[j - r] * tmp;
        }
        out[j] = saved;
    }
}

std::vector<double> clamped_knots_interp(std::span<const double> x, int degree) {
    const int n = static_cast<int>(x.size());
    std::vector<double> knots(n + degree + 1);
    for (int i = 0; i <= degree; ++i) {
        knots[i] = x.front();
        knots[n + i] = x.back();
    }
    for (int j = 1; j <= n - degree - 1; ++j) {
        double s = 0.0;
        for (int l = j; l < j + degree; ++l) s += x[l];
        knots[degree + j] = s / degree;
    }
    return knots;
}

std::vector<double> clamped_knots_uniform(double a, double b, int degree, int num_coef) {
    std::vector<double> knots(num_coef + degree + 1);
    const int interior = num_coef - degree - 1;
    for (int i = 0; i <= degree; ++i) {
        knots[i] = a;
        knots[num_coef + i] = b;
    }
    for (int j = 1; j <= interior; ++j)
        knots[degree + j] = a + (b - a) * j / (interior + 1.0);
    return knots;
}

}  // namespace

BsplineCurve BsplineCurve::interpolate(std::span<const double> x,
                                       std::span<const double> y, int degree) {
    const int n = static_cast<int>(x.size());
    if (n < degree + 1)
        throw std::invalid_argument("BsplineCurve: need at least degree+1 points");
    if (y.size() != x.size())
        throw std::invalid_argument("BsplineCurve: x/y size mismatch");
    BsplineCurve c;
    c.degree_ = degree;
    c.knots_ = clamped_knots_interp(x, degree);
    std::vector<double> mat(static_cast<size_t>(n) * n, 0.0);
    std::vector<double> basis(degree + 1);
    for (int i = 0; i < n; ++i) {
        const int span = find_span(c.knots_, n, degree, x[i]);
        basis_funs(c.knots_, span, degree, x[i], basis.data());
        for (int j = 0; j <= degree; ++j) mat[i * n + (span - degree + j)] = basis[j];
    }
    c.coefs_ = solve_dense(std::move(mat), std::vector<double>(y.begin(), y.end()), n);
    return c;
}

BsplineCurve BsplineCurve::fit_least_squares(std::span<const double> x,
                                             std::span<const double> y, int degree,
                                             int num_coef) {
    const int n = static_cast<int>(x.size());
    if (num_coef < degree + 1)
        throw std::invalid_argument("BsplineCurve: num_coef must be >= degree+1");
    if (n < num_coef)
        throw std::invalid_argument("BsplineCurve: fewer points than coefficients");
    BsplineCurve c;
    c.degree_ = degree;
    c.knots_ = clamped_knots_uniform(x.front(), x.back(), degree, num_coef);
    std::vector<double> ata(static_cast<size_t>(num_coef) * num_coef, 0.0);
    std::vector<double> aty(num_coef, 0.0);
    std::vector<double> basis(degree + 1);
    for (int i = 0; i < n; ++i) {
        const int span = find_span(c.knots_, num_coef, degree, x[i]);
        basis_funs(c.knots_, span, degree, x[i], basis.data());
        const int base = span - degree;
        for (int r = 0; r <= degree; ++r) {
            aty[base + r] += basis[r] * y[i];
            for (int s = 0; s <= degree; ++s)
                ata[(base + r) * num_coef + (base + s)] += basis[r] * basis[s];
        }
    }
    c.coefs_ = solve_dense(std::move(ata), std::move(aty), num_coef);
    return c;
}

double BsplineCurve::operator()(double x) const {
    const int n = static_cast<int>(coefs_.size());
    const double xc = std::clamp(x, knots_.front(), knots_.back());
    const int span = find_span(knots_, n, degree_, xc);
    std::vector<double> basis(degree_ + 1);
    basis_funs(knots_, span, degree_, xc, basis.data());
    double acc = 0.0;
    for (int j = 0; j <= degree_; ++j) acc += basis[j] * coefs_[span - degree_ + j];
    return acc;
}

SplineBoundary::SplineBoundary(std::vector<std::pair<double, double>> control, int order)
    : control_(std::move(control)), order_(order) {
    if (static_cast<int>(control_.size()) < order_ + 1)
        throw InvalidBoundary("spline: need at least order+1 control points");
    std::vector<double> x, y;
    x.reserve(control_.size());
    y.reserve(control_.size());
    for (auto& [cx, cy] : control_) {
        if (!x.empty() && cx <= x.back())
            throw InvalidBoundary("spline: control abscissae must be strictly increasing");
        x.push_back(cx);
        y.push_back(cy);
    }
    curve_ = BsplineCurve::interpolate(x, y, order_);
}

double SplineBoundary::evaluate(double beta) const {
    if (beta < 0.0 || beta > 1.0) throw std::domain_error("spline: beta outside [0, 1]");
    return curve_(beta);
}

SplineCurveBoundary fit_regression_spline(std::span<const std::pair<double, double>> pts,
                                          int order, int num_coef) {
    std::vector<double> x, y;
    x.reserve(pts.size());
    y.reserve(pts.size());
    for (auto& [px, py] : pts) {
        x.push_back(px);
        y.push_back(py);
    }
    return SplineCurveBoundary(BsplineCurve::fit_least_squares(x, y, order, num_coef));
}

// ---------------------------------------------------------------------------
// Baselines
// ---------------------------------------------------------------------------

PiecewiseLinearBoundary baseline_curve(const BaselineDetector& d) {
    using Kind = BaselineDetector::Kind;
    if (!(d.eta > 0.0)) throw std::invalid_argument("baseline: threshold must be > 0");
    switch (d.kind) {
        case Kind::kelly:
            if (d.eta >= 1.0)
                throw std::invalid_argument("baseline: Kelly requires eta < 1");
            return PiecewiseLinearBoundary::constant(d.eta / (1.0 - d.eta));
        case Kind::amf:
            return PiecewiseLinearBoundary({d.eta}, {0.0});
        case Kind::ace:
            if (d.eta >= 1.0)
                throw std::invalid_argument("baseline: ACE requires eta < 1");
            return PiecewiseLinearBoundary({-d.eta / (1.0 - d.eta)},
                                           {d.eta / (1.0 - d.eta)});
        case Kind::kalson:
            if (d.kalson_kappa < 0.0 || d.kalson_kappa > 1.0)
                throw std::invalid_argument("baseline: Kalson kappa must lie in [0, 1]");
            return PiecewiseLinearBoundary({d.eta * (1.0 - d.kalson_kappa)},
                                           {d.eta * d.kalson_kappa});
    }
    throw std::invalid_argument("baseline: unknown kind");
}

double raw_statistic(const BaselineDetector& d, const ComplexVec& z,
                     const CholeskyFactor& s_chol, const ComplexVec& v) {
    ComplexVec zu = z;
    ComplexVec vu = v;
    s_chol.solve_lower_inplace(zu);
    s_chol.solve_lower_inplace(vu);
    const double vv = dot_conj(vu, vu).real();
    if (vv <= 0.0) throw std::invalid_argument("raw_statistic: v must be nonzero");
    const double zz = dot_conj(zu, zu).real();
    const double q = std::norm(dot_conj(zu, vu)) / vv;
    using Kind = BaselineDetector::Kind;
    switch (d.kind) {
        case Kind::kelly:
            return q / (1.0 + zz);
        case Kind::amf:
            return q;
        case Kind::ace:
            return zz > 0.0 ? q / zz : 0.0;
        case Kind::kalson:
            return q / (1.0 + d.kalson_kappa * (zz - q));
    }
    throw std::invalid_argument("raw_statistic: unknown kind");
}

double kelly_t_threshold(double pfa, const ProblemDims& dims) {
    if (!(pfa > 0.0 && pfa < 1.0))
        throw std::invalid_argument("kelly_t_threshold: pfa must lie in (0, 1)");
    return std::pow(pfa, -1.0 / dims.dof_f()) - 1.0;
}

// ---------------------------------------------------------------------------
// Juxtaposition
// ---------------------------------------------------------------------------

TabulatedBoundary juxtapose(std::span<const BoundaryPart> parts, int samples_per_part) {
    if (parts.empty()) throw InvalidBoundary("juxtapose: no parts");
    if (samples_per_part < 4) throw std::invalid_argument("juxtapose: too few samples");
    constexpr double kEdgeTol = 1e-12;
    if (std::abs(parts.front().lo) > kEdgeTol || std::abs(parts.back().hi - 1.0) > kEdgeTol)
        throw InvalidBoundary("juxtapose: intervals must cover [0, 1]");
    for (size_t j = 0; j + 1 < parts.size(); ++j)
        if (std::abs(parts[j].hi - parts[j + 1].lo) > kEdgeTol)
            throw InvalidBoundary("juxtapose: intervals overlap or leave a gap");

    std::vector<double> grid, values, breaks;
    for (size_t j = 0; j < parts.size(); ++j) {
        const auto& p = parts[j];
        if (!(p.hi > p.lo)) throw InvalidBoundary("juxtapose: empty interval");
        const bool last = (j + 1 == parts.size());
        const int ns = samples_per_part;
        // Left-closed blocks: the shared edge sample belongs to the next part.
        for (int s = 0; s < ns; ++s) {
            const double b = p.lo + (p.hi - p.lo) * s / ns;
            grid.push_back(b);
            values.push_back(p.curve->evaluate(b));
        }
        if (last) {
            grid.push_back(p.hi);
            values.push_back(p.curve->evaluate(p.hi));
        } else {
            breaks.push_back(p.hi);
        }
    }
    return TabulatedBoundary(std::move(grid), std::move(values), std::move(breaks));
}

const char* to_string(BaselineDetector::Kind kind) {
    switch (kind) {
        case BaselineDetector::Kind::kelly: return "kelly";
        case BaselineDetector::Kind::amf: return "amf";
        case BaselineDetector::Kind::ace: return "ace";
        case BaselineDetector::Kind::kalson: return "kalson";
    }
    return "unknown";
}

BaselineDetector::Kind baseline_kind_from_string(const std::string& name) {
    if (name == "kelly") return BaselineDetector::Kind::kelly;
    if (name == "amf") return BaselineDetector::Kind::amf;
    if (name == "ace") return BaselineDetector::Kind::ace;
    if (name == "kalson") return BaselineDetector::Kind::kalson;
    throw std::invalid_argument("unknown baseline detector: " + name);
}

}  // namespace cfarfp

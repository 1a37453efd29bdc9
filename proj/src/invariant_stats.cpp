#include "cfarfp/invariant_stats.hpp"

#include <cmath>
#include <stdexcept>

#include "cfarfp/specfun.hpp"

namespace cfarfp {

ProblemDims::ProblemDims(int n_, int k_) : n(n_), k(k_) {
    if (n < 2) throw std::invalid_argument("ProblemDims: need n >= 2");
    if (k < n) throw std::invalid_argument("ProblemDims: need k >= n");
}

FeaturePoint feature_map(const ComplexVec& z, const CholeskyFactor& s_chol,
                         const ComplexVec& v) {
    ComplexVec zu = z;
    ComplexVec vu = v;
    s_chol.solve_lower_inplace(zu);
    s_chol.solve_lower_inplace(vu);
    const double vv = dot_conj(vu, vu).real();
    if (vv <= 0.0) throw std::invalid_argument("feature_map: v must be nonzero");
    const double zz = dot_conj(zu, zu).real();
    const double q = std::norm(dot_conj(zu, vu)) / vv;
    // Cauchy-Schwarz gives zz >= q, so d >= 1 and beta lands in (0, 1].
    const double d = 1.0 + std::max(zz - q, 0.0);
    return FeaturePoint{1.0 / d, q / d};
}

FeaturePoint feature_map(const ComplexVec& z, const HermitianMatrix& s,
                         const ComplexVec& v) {
    return feature_map(z, cholesky(s), v);
}

double cos_squared_angle(const ComplexVec& p, const ComplexVec& v,
                         const CholeskyFactor& c_chol) {
    ComplexVec pu = p;
    ComplexVec vu = v;
    c_chol.solve_lower_inplace(pu);
    c_chol.solve_lower_inplace(vu);
    const double pp = dot_conj(pu, pu).real();
    const double vv = dot_conj(vu, vu).real();
    if (pp <= 0.0 || vv <= 0.0)
        throw std::invalid_argument("cos_squared_angle: zero vector input");
    const double c2 = std::norm(dot_conj(pu, vu)) / (pp * vv);
    return c2 < 1.0 ? c2 : 1.0;
}

double cos_squared_angle(const ComplexVec& p, const ComplexVec& v,
                         const HermitianMatrix& c) {
    return cos_squared_angle(p, v, cholesky(c));
}

double snr(cxd alpha, const ComplexVec& p, const CholeskyFactor& c_chol) {
    ComplexVec pu = p;
    c_chol.solve_lower_inplace(pu);
    return std::norm(alpha) * dot_conj(pu, pu).real();
}

double snr(cxd alpha, const ComplexVec& p, const HermitianMatrix& c) {
    return snr(alpha, p, cholesky(c));
}

double noncentral_f_cdf(double f, double noncentrality, const ProblemDims& dims) {
    if (f < 0.0) throw std::invalid_argument("noncentral_f_cdf: f must be >= 0");
    if (noncentrality < 0.0)
        throw std::invalid_argument("noncentral_f_cdf: negative noncentrality");
    if (f == 0.0) return 0.0;
    const int l_max = dims.dof_f();
    const double u = 1.0 / (1.0 + f);
    const double w = f * u;
    const double y = noncentrality * u;
    // Binomial-type sum: each term C(L,l) w^l u^(L-l) Q(l, y); all factors stay
    // bounded, so no overflow even for huge thresholds.
    double q = std::exp(-y);   // running regularized upper gamma Q(l, y)
    double qt = q;             // running y^i e^-y / i!
    double wp = w;             // w^l
    double up = std::pow(u, l_max - 1);
    double binom = l_max;      // C(L, l)
    double sum = 0.0;
    for (int l = 1; l <= l_max; ++l) {
        sum += binom * wp * up * q;
        if (l == l_max) break;
        wp *= w;
        up /= u;
        qt *= y / l;
        q += qt;
        binom *= static_cast<double>(l_max - l) / (l + 1.0);
    }
    return sum < 1.0 ? sum : 1.0;
}

namespace {

// Shared carrier e^(-d2*beta) beta^(A-1) (1-beta)^(B-1); pow(0,0) == 1 covers the
// N = 2 edge.
double beta_carrier(double beta, double d2, int a, int b) {
    return std::exp(-d2 * beta) * std::pow(beta, a - 1) * std::pow(1.0 - beta, b - 1);
}

}  // namespace

double noncentral_beta_pdf(double beta, double noncentrality, const ProblemDims& dims,
                           BetaPdfRoute route) {
    if (beta <= 0.0 || beta >= 1.0) {
        if (beta == 0.0 || beta == 1.0) return 0.0;  // continuous limit
        throw std::invalid_argument("noncentral_beta_pdf: beta outside (0, 1)");
    }
    const int a = dims.dof_beta_a();
    const int b = dims.dof_beta_b();
    const double carrier = beta_carrier(beta, noncentrality, a, b);
    const double x = noncentrality * (beta - 1.0);
    if (route == BetaPdfRoute::kummer) {
        const double norm =
            std::exp(std::lgamma(dims.k + 1.0) - std::lgamma(static_cast<double>(a)) -
                     std::lgamma(static_cast<double>(b)));
        return norm * carrier * hyp1f1_poly(a, b, x);
    }
    return static_cast<double>(a) * carrier * laguerre(a, b - 1, x);
}

double noncentral_beta_pdf_series(double beta, double noncentrality,
                                  const ProblemDims& dims) {
    if (beta <= 0.0 || beta >= 1.0) {
        if (beta == 0.0 || beta == 1.0) return 0.0;
        throw std::invalid_argument("noncentral_beta_pdf_series: beta outside (0, 1)");
    }
    const int a = dims.dof_beta_a();
    const int b = dims.dof_beta_b();
    const int n = dims.n;
    // sum_{j=0}^{A} C(A,j) d2^j (1-beta)^j / (N+j-2)!
    double term = 1.0 / std::tgamma(n - 1.0);  // j = 0
    double sum = term;
    const double z = noncentrality * (1.0 - beta);
    for (int j = 0; j < a; ++j) {
        term *= (static_cast<double>(a - j) / (j + 1.0)) * z / (n + j - 1.0);
        sum += term;
    }
    const double pref = std::exp(std::lgamma(dims.k + 1.0) - std::lgamma(static_cast<double>(a)));
    return pref * beta_carrier(beta, noncentrality, a, b) * sum;
}

double central_beta_cdf(double x, const ProblemDims& dims) {
    return reg_inc_beta_int(dims.dof_beta_a(), dims.dof_beta_b(), x);
}

}  // namespace cfarfp

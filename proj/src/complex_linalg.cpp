#include "cfarfp/complex_linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace cfarfp {

HermitianMatrix::HermitianMatrix(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("HermitianMatrix: dimension must be >= 1");
    lo_.assign(static_cast<size_t>(n) * (n + 1) / 2, cxd{0.0, 0.0});
}

cxd HermitianMatrix::operator()(int r, int c) const {
    if (r < c) return std::conj(lo_[idx(c, r)]);
    return lo_[idx(r, c)];
}

void HermitianMatrix::add_outer(const ComplexVec& z) {
    if (static_cast<int>(z.size()) != n_)
        throw std::invalid_argument("add_outer: dimension mismatch");
    for (int r = 0; r < n_; ++r) {
        const cxd zr = z[r];
        for (int c = 0; c <= r; ++c) lo_[idx(r, c)] += zr * std::conj(z[c]);
    }
    // keep the diagonal exactly real
    for (int r = 0; r < n_; ++r) {
        auto& d = lo_[idx(r, r)];
        d = cxd{d.real(), 0.0};
    }
}

void HermitianMatrix::add_scaled_identity(double s) {
    for (int r = 0; r < n_; ++r) lo_[idx(r, r)] += s;
}

void HermitianMatrix::set(int r, int c, cxd value) {
    if (r < c) throw std::invalid_argument("set: only the lower triangle is stored");
    if (r == c) value = cxd{value.real(), 0.0};
    lo_[idx(r, c)] = value;
}

void HermitianMatrix::scale(double s) {
    for (auto& v : lo_) v *= s;
}

HermitianMatrix gram_accumulate(std::span<const ComplexVec> snapshots) {
    if (snapshots.empty()) throw std::invalid_argument("gram_accumulate: no snapshots");
    const int n = static_cast<int>(snapshots.front().size());
    HermitianMatrix s(n);
    for (const auto& z : snapshots) {
        if (static_cast<int>(z.size()) != n)
            throw std::invalid_argument("gram_accumulate: snapshot dimension mismatch");
        s.add_outer(z);
    }
    return s;
}

cxd CholeskyFactor::entry(int r, int c) const {
    if (r < c) return cxd{0.0, 0.0};
    return lo_[static_cast<size_t>(r) * (r + 1) / 2 + c];
}

void CholeskyFactor::solve_lower_inplace(ComplexVec& b) const {
    if (static_cast<int>(b.size()) != n_)
        throw std::invalid_argument("solve_lower: dimension mismatch");
    for (int r = 0; r < n_; ++r) {
        cxd acc = b[r];
        const size_t row = static_cast<size_t>(r) * (r + 1) / 2;
        for (int c = 0; c < r; ++c) acc -= lo_[row + c] * b[c];
        b[r] = acc / lo_[row + r];
    }
}

void CholeskyFactor::solve_upper_inplace(ComplexVec& b) const {
    if (static_cast<int>(b.size()) != n_)
        throw std::invalid_argument("solve_upper: dimension mismatch");
    for (int r = n_ - 1; r >= 0; --r) {
        cxd acc = b[r];
        for (int c = r + 1; c < n_; ++c)
            acc -= std::conj(lo_[static_cast<size_t>(c) * (c + 1) / 2 + r]) * b[c];
        b[r] = acc / lo_[static_cast<size_t>(r) * (r + 1) / 2 + r];
    }
}

ComplexVec CholeskyFactor::solve(ComplexVec b) const {
    solve_lower_inplace(b);
    solve_upper_inplace(b);
    return b;
}

CholeskyFactor cholesky(const HermitianMatrix& a) {
    const int n = a.dim();
    CholeskyFactor f;
    f.n_ = n;
    f.lo_.assign(static_cast<size_t>(n) * (n + 1) / 2, cxd{0.0, 0.0});
    auto at = [&](int r, int c) -> cxd& {
        return f.lo_[static_cast<size_t>(r) * (r + 1) / 2 + c];
    };
    for (int j = 0; j < n; ++j) {
        double d = a(j, j).real();
        for (int k = 0; k < j; ++k) d -= std::norm(at(j, k));
        if (!(d > 0.0) || !std::isfinite(d))
            throw NotPositiveDefinite("cholesky: non-positive pivot at column " +
                                      std::to_string(j));
        const double ljj = std::sqrt(d);
        at(j, j) = ljj;
        for (int i = j + 1; i < n; ++i) {
            cxd acc = a(i, j);
            for (int k = 0; k < j; ++k) acc -= at(i, k) * std::conj(at(j, k));
            at(i, j) = acc / ljj;
        }
    }
    return f;
}

cxd dot_conj(const ComplexVec& x, const ComplexVec& y) {
    if (x.size() != y.size()) throw std::invalid_argument("dot_conj: dimension mismatch");
    cxd acc{0.0, 0.0};
    for (size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
    return acc;
}

cxd quad_form(const CholeskyFactor& f, const ComplexVec& x, const ComplexVec& y) {
    ComplexVec u = x;
    ComplexVec w = y;
    f.solve_lower_inplace(u);
    f.solve_lower_inplace(w);
    return dot_conj(u, w);
}

cxd quad_form(const HermitianMatrix& a, const ComplexVec& x, const ComplexVec& y) {
    return quad_form(cholesky(a), x, y);
}

}  // namespace cfarfp

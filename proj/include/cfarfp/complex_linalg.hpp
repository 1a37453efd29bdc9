#pragma once

// Small dense complex Hermitian linear algebra: Gram accumulation, Cholesky,
// and quadratic forms x' A^-1 y evaluated through triangular solves. Matrices
// are stored as a packed lower triangle so Hermitian symmetry is structural.

#include <complex>
#include <span>
#include <vector>

#include "cfarfp/errors.hpp"

namespace cfarfp {

using cxd = std::complex<double>;
using ComplexVec = std::vector<cxd>;

class HermitianMatrix {
public:
    explicit HermitianMatrix(int n);

    int dim() const noexcept { return n_; }

    // Mirrors the stored lower triangle: (r, c) with r < c returns conj((c, r)).
    cxd operator()(int r, int c) const;

    // A += z z'
    void add_outer(const ComplexVec& z);
    // A += s I
    void add_scaled_identity(double s);
    void set(int r, int c, cxd value);  // r >= c
    void scale(double s);

private:
    friend class CholeskyFactor;
    size_t idx(int r, int c) const { return static_cast<size_t>(r) * (r + 1) / 2 + c; }

    int n_;
    std::vector<cxd> lo_;  // packed lower triangle, row-major
};

// S = sum_k z_k z_k'
HermitianMatrix gram_accumulate(std::span<const ComplexVec> snapshots);

class CholeskyFactor {
public:
    int dim() const noexcept { return n_; }
    cxd entry(int r, int c) const;  // lower triangle, zero above

    void solve_lower_inplace(ComplexVec& b) const;  // L y = b
    void solve_upper_inplace(ComplexVec& b) const;  // L' x = y
    ComplexVec solve(ComplexVec b) const;           // A^-1 b

    friend CholeskyFactor cholesky(const HermitianMatrix& a);

private:
    int n_ = 0;
    std::vector<cxd> lo_;
};

// Throws NotPositiveDefinite on a non-positive pivot; no pivoting or repair.
CholeskyFactor cholesky(const HermitianMatrix& a);

// x' A^-1 y via two lower-triangular solves: (L^-1 x)' (L^-1 y).
cxd quad_form(const CholeskyFactor& f, const ComplexVec& x, const ComplexVec& y);
cxd quad_form(const HermitianMatrix& a, const ComplexVec& x, const ComplexVec& y);

cxd dot_conj(const ComplexVec& x, const ComplexVec& y);  // x' y

}  // namespace cfarfp

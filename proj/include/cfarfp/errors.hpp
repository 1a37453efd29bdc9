#pragma once

#include <stdexcept>
#include <string>

namespace cfarfp {

// Cholesky hit a non-positive pivot: the input is not (numerically) positive definite.
struct NotPositiveDefinite : std::runtime_error {
    explicit NotPositiveDefinite(const std::string& what) : std::runtime_error(what) {}
};

// Adaptive quadrature could not reach the requested tolerance at max refinement depth.
struct QuadratureError : std::runtime_error {
    explicit QuadratureError(const std::string& what) : std::runtime_error(what) {}
};

// A hypergeometric series failed to converge within the term budget.
struct SeriesError : std::runtime_error {
    explicit SeriesError(const std::string& what) : std::runtime_error(what) {}
};

// A boundary violates the contract of the operation (negative threshold where the
// closed-form derivation requires a valid CDF argument, bad partition, ...).
struct InvalidBoundary : std::runtime_error {
    explicit InvalidBoundary(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cfarfp

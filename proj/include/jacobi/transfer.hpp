#pragma once

// One-step transfer matrices for the three-term recurrence
//   a(n) u(n+1) + b(n) u(n) + a(n-1) u(n-1) = z u(n),
// scaled products of them, finite-volume Lyapunov exponents, and the
// Dirichlet solution pair (c, s).

#include <complex>
#include <cstdint>

#include "jacobi/lattice.hpp"

namespace jacobi {

using cplx = std::complex<double>;

// Dense 2x2 complex matrix, row major.  Only what the transfer-matrix
// code needs: multiply, determinant, Frobenius norm.
struct Mat2c {
    cplx e00{1.0}, e01{0.0}, e10{0.0}, e11{1.0};

    Mat2c operator*(const Mat2c& r) const {
        return {e00 * r.e00 + e01 * r.e10, e00 * r.e01 + e01 * r.e11,
                e10 * r.e00 + e11 * r.e10, e10 * r.e01 + e11 * r.e11};
    }
    cplx det() const { return e00 * e11 - e01 * e10; }
    double frobenius() const;
    static Mat2c identity() { return {}; }
};

// M(z, n) = (1/a(n)) [[z - b(n), -1], [a(n)^2, 0]].
// Maps (u(n), a(n-1) u(n-1)) to (u(n+1), a(n) u(n)); det M = +1.
// Throws std::domain_error unless a > 0.
Mat2c step_matrix(ComplexEnergy z, double a, double b);

// Running 2x2 product kept near unit Frobenius norm.  The true product is
// mat * exp(logscale); factors are absorbed on the right-to-left order
// (absorb(m) performs  m * current), matching the usual composition
// M(N-1) ... M(1) M(0).
struct ScaledProduct {
    Mat2c mat = Mat2c::identity();
    double logscale = 0.0;

    void absorb(const Mat2c& m);
    // log of the Frobenius norm of the true product.
    double log_norm() const;
};

// Product M(z, n0+len-1) ... M(z, n0) over a coefficient range.
ScaledProduct transfer_product(const Coefficients& j, ComplexEnergy z,
                               std::int64_t n0, std::int64_t len);

// log ||M(z, n0+len-1) ... M(z, n0)|| / len  (Frobenius norm).
double lyapunov_finite(const Coefficients& j, ComplexEnergy z, std::int64_t n0,
                       std::int64_t len);

// One solution of the recurrence tracked with its own scale: the true
// values are val * exp(logscale) and prev * exp(logscale).
struct ScaledPair {
    cplx val{0.0};
    cplx prev{0.0};
    double logscale = 0.0;

    double log_abs() const { return std::log(std::abs(val)) + logscale; }
    double log_abs_prev() const { return std::log(std::abs(prev)) + logscale; }
};

// Solutions c, s of the recurrence with Dirichlet-type initial data:
//   c(z, 0) = 1, c(z, -1) = 0;   s(z, 0) = 0, s(z, 1) = 1/a(0).
// c(z, n) times a(0)...a(n-1) is det(z - J restricted to [0, n-1]);
// s(z, n) times the same product is det(z - J restricted to [1, n-1]).
// The transfer product over [0, n-1] equals
//   [[c(z, n), -s(z, n)], [a(n-1) c(z, n-1), -a(n-1) s(z, n-1)]].
struct CosSin {
    ScaledPair c;  // val = c(z, n), prev = c(z, n-1)
    ScaledPair s;  // val = s(z, n), prev = s(z, n-1)
};

// Evaluate c and s at index n (n >= 0) for the operator restricted with
// left endpoint 0.
CosSin cosine_sine(const Coefficients& j, ComplexEnergy z, std::int64_t n);

}  // namespace jacobi

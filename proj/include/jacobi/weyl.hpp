#pragma once

// Weyl m-functions of half-line and finite-box restrictions, the product
// expansion of the decaying solution u_+, the m-route Lyapunov estimator,
// and a reflectionless-defect diagnostic.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "jacobi/lattice.hpp"
#include "jacobi/transfer.hpp"

namespace jacobi {

// Raised when the continued fraction fails to settle within the depth cap;
// carries the deepest approximant so callers can still inspect it.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& msg, cplx best, std::int64_t depth)
        : std::runtime_error(msg), best_value(best), depth_reached(depth) {}

    cplx best_value;
    std::int64_t depth_reached;
};

struct MFunctionValue {
    enum class Method { continued_fraction, box_resolvent };

    cplx value{0.0};
    Method method = Method::continued_fraction;
    std::int64_t depth = 0;    // truncation depth / box size
    double est_error = 0.0;    // Cauchy difference + method cross-check gap
};

// m(z) = <delta_0, (J restricted to [0, inf) - z)^{-1} delta_0> for
// Im z > 0, via the continued fraction m = 1/(b(k) - z - a(k)^2 m_next)
// truncated with tail 0.  Depth doubles (starting at 32) until successive
// approximants differ by < tol; every result is cross-checked against the
// tridiagonal-elimination box resolvent of the same depth.  Depth cap 1e6,
// exceeded -> ConvergenceError.
MFunctionValue m_plus(const Coefficients& j, ComplexEnergy z, double tol);

// Same quantity computed by Thomas elimination on (J_[0, boxsize-1] - z):
// the independent cross-check route.
cplx m_plus_box(const Coefficients& j, ComplexEnergy z, std::int64_t boxsize);

// m of the left half line (sites <= -1), realized as m_plus of the
// index-reflected coefficients a'(n) = a(-n-2), b'(n) = b(-n-1).
MFunctionValue m_minus(const Coefficients& j, ComplexEnergy z, double tol);

// Right-corner resolvent entry <delta_N, (J_[0,N] - z)^{-1} delta_N> by the
// forward corner recursion g(k) = 1/(b(k) - z - a(k-1)^2 g(k-1)).
// Satisfies c(z, N+1)/c(z, N) = -1/(a(N) g(N)).
cplx box_m(const Coefficients& j, ComplexEnergy z, std::int64_t n);

// Lyapunov exponent via the m-function route:
//   -(1/N) sum_{n<N} [ log a(n) + log|m_plus(z, shift(J, n))| ].
// Shift terms evaluate in parallel; the reduction is a fixed pairwise tree,
// so results do not depend on scheduling.
double lyap_via_m(const Coefficients& j, ComplexEnergy z, std::int64_t n,
                  double tol);

// Consistency report for the product expansion of the decaying solution:
// with u(-1) = 1, |u(N)| should equal prod_{n=0}^{N} a(n-1) |m_plus(z, shift(J,n))|.
// u is computed independently by a backward sweep from a Dirichlet tail on
// an adaptively enlarged box.  The complex ratio u(N) / prod(a m) is +-1 in
// exact arithmetic; its sign is reported, not asserted.
struct UPlusReport {
    double log_modulus_u = 0.0;      // log|u(N)|
    double log_modulus_prod = 0.0;   // sum of log(a(n-1) |m|)
    double modulus_rel_error = 0.0;  // |exp(difference) - 1|
    cplx sign_ratio{0.0};            // u(N) / prod(a m), near +1 or -1
    int sign = 0;                    // rounded real part of sign_ratio
    std::int64_t box_size = 0;       // backward-sweep truncation box
};

UPlusReport u_plus_check(const Coefficients& j, ComplexEnergy z, std::int64_t n);

// |m_plus(E + i eta) + conj(m_minus(E + i eta))|: a heuristic proxy for the
// reflectionless boundary condition; small values at small eta are
// suggestive, nothing more.
double reflectionless_defect(const Coefficients& j, double e, double eta,
                             double tol);

}  // namespace jacobi

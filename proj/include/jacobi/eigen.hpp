#pragma once

// Symmetric tridiagonal eigenvalue machinery: Sturm-sequence counts,
// bisection eigenvalues, the box density-of-states measure, log-potentials,
// and the finite-volume Thouless right-hand side.

#include <cstdint>
#include <vector>

#include "jacobi/lattice.hpp"

namespace jacobi {

// Uniform probability measure on the eigenvalues of a finite box.
struct DOSMeasure {
    std::vector<double> eigenvalues;  // ascending, with multiplicity

    std::size_t size() const { return eigenvalues.size(); }
    double weight() const { return 1.0 / static_cast<double>(eigenvalues.size()); }
};

// Number of eigenvalues of the tridiagonal window strictly below e,
// by counting negative pivots of the LDL^T factorization of W - e.
// Vanishing pivots are nudged to -pivmin (LAPACK-style safeguard), so the
// count is exact whenever e is not an eigenvalue.
std::int64_t sturm_count(const Window& w, double e);

// All eigenvalues of the window to absolute accuracy tol, ascending.
// Bisection on sturm_count inside the Gershgorin enclosure; clusters
// narrower than tol are emitted as one midpoint with multiplicity.
// Interior strips are processed in parallel; output is deterministic.
std::vector<double> eigenvalues_bisect(const Window& w, double tol);

// Eigenvalue measure of the restriction to [0, n-1].  tol <= 0 selects the
// default accuracy 1e-10 * c0.
DOSMeasure dos_measure(const Coefficients& j, std::int64_t n, double tol = 0.0);

// Fraction of box eigenvalues below e: sturm_count / n.  One O(n) pivot
// sweep per energy; no diagonalization.
double ids_estimate(const Coefficients& j, double e, std::int64_t n);
double ids_estimate(const Window& w, double e);

// (1/n) sum of log|lambda_j - z|.  At eta = 0 an energy within 1e-14 of an
// atom is rejected (std::domain_error): the integrand is genuinely singular
// there and silent regularization would hide that.
double log_potential(const DOSMeasure& nu, ComplexEnergy z);

// Mean of log a(j) over j = 0..n-1 (deterministic pairwise summation).
double mean_log_a(const Coefficients& j, std::int64_t n);

// log_potential of the n-box measure minus the mean of log a over the box.
// Algebraically equal to (1/n) log|c(z, n)| for the same operator.
double thouless_rhs(const Coefficients& j, ComplexEnergy z, std::int64_t n);
// Grid-friendly form with the measure and mean log a precomputed.
double thouless_rhs(const DOSMeasure& nu, double mean_log_a, ComplexEnergy z);

}  // namespace jacobi

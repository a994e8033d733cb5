#pragma once

// Empirical measures of operator translates, moment-dictionary distances
// (a finite surrogate for weak-* comparison), convergence-in-probability
// counts, and the deviation-density statistic.

#include <cstdint>
#include <optional>
#include <vector>

#include "jacobi/lattice.hpp"

namespace jacobi {

// (1/N) sum of point masses at the shifts J, J^(1), ..., J^(N-1),
// materialized as the radius-k window around each shift.  Memory is
// (4k+1)*N doubles; construction refuses plans beyond ~4e8 entries.
struct EmpiricalMeasure {
    std::int64_t k = 0;           // window radius (k >= 0)
    double c0 = 1.5;              // bound constant of the sampled operator
    std::vector<Window> windows;  // N windows, each of length 2k+1

    std::int64_t size() const { return static_cast<std::int64_t>(windows.size()); }
    double weight() const { return 1.0 / static_cast<double>(windows.size()); }
};

EmpiricalMeasure empirical_measure(const Coefficients& j, std::int64_t n,
                                   std::int64_t k);

// Averages of the monomial dictionary over the measure: all monomials of
// degree <= degree (1 or 2) in the normalized window entries
// { a(j)/cnorm : -k <= j < k } and { b(j)/cnorm : |j| <= k }.
// Every entry has magnitude <= 1.
struct MomentVector {
    std::int64_t k = 0;
    int degree = 1;
    double cnorm = 1.5;
    std::vector<double> values;
};

MomentVector moment_vector(const EmpiricalMeasure& m, int degree, double cnorm);

// Max absolute moment gap over the shared dictionary (cnorm = the larger of
// the two bound constants).  A pseudometric: moments up to the fixed degree
// cannot separate everything.
double cylinder_distance(const EmpiricalMeasure& m1, const EmpiricalMeasure& m2,
                         int degree);

// Where translates are expected to accumulate: a single operator, or the
// one-point isospectral family of [-2, 2] (the free operator).
class Target {
public:
    static Target single_operator(Coefficients op) { return Target(std::move(op)); }
    static Target free_torus() { return Target(); }

    bool is_free_torus() const { return !op_.has_value(); }
    const Coefficients& op() const { return *op_; }

private:
    Target() = default;
    explicit Target(Coefficients op) : op_(std::move(op)) {}
    std::optional<Coefficients> op_;
};

// (1/N) #{ 1 <= n <= N : d(J^(n), target) >= eps }, with d the radius-k
// truncation of the product-topology metric.
double convergence_in_probability(const Coefficients& j, const Target& target,
                                  std::int64_t n, double eps, std::int64_t k);

// (1/N) #{ 1 <= n <= N : |a(n) - 1| > eps or |b(n)| > eps }: the density of
// sites where the coefficients deviate from the free pair.
double drr_statistic(const Coefficients& j, std::int64_t n, double eps);

}  // namespace jacobi

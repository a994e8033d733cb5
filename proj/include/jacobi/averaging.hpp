#pragma once

// Closed forms for constant-potential operators, parameter averages of
// those closed forms (quadrature in the exactly-solvable case, Monte Carlo
// over skew-shift parameters otherwise), and the direct-vs-averaged report
// rows the CLI emits.

#include <cmath>
#include <cstdint>
#include <vector>

#include "jacobi/lattice.hpp"
#include "jacobi/models.hpp"

namespace jacobi {

// Lyapunov exponent of the operator with a == 1, b == c:
// log|w + sqrt(w^2 - 1)|, w = (z - c)/2, taking the root of modulus >= 1.
// On the spectral band (real z with |z - c| <= 2) this is exactly 0.
double gamma_const(double c, ComplexEnergy z);

// Integrated density of states of the same operator:
// (1/pi) arccos(-(E - c)/2), clamped to [0, 1] outside the band.
double k_const(double c, double e);

// The band interval every constant operator b == f(alpha) shares:
// [-2 + max f, 2 + min f]; empty when max f - min f > 4.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool empty = false;
};
Interval simonzhu_interval(const ProfileFunction& f);

enum class AvgQuantity { lyapunov, ids };

// Composite-midpoint average over alpha in [0,1] of the constant-family
// quantity at c = f(alpha).  Midpoint avoids endpoint evaluation (f(0) and
// f(1) may differ) and tolerates the band-edge kinks of the integrand.
// value is the 2*nodes estimate; err the node-doubling difference.
struct QuadResult {
    double value = 0.0;
    double err = 0.0;
    std::int64_t nodes = 0;  // nodes actually used for value
};
QuadResult average_r0(const ProfileFunction& f, double e, AvgQuantity q,
                      std::int64_t nodes);

// Monte-Carlo average of finite-volume Lyapunov exponents of skew-shift
// operators: alpha gets n_alpha samples, omega n_omega samples each, every
// sample runs a length-n_inner transfer product at real energy e.  Sample
// parameters come from counter-based substreams of the seed, so the result
// is bit-reproducible and independent of thread scheduling.
struct MCResult {
    double mean = 0.0;
    double se = 0.0;  // jackknife standard error of the mean
    std::int64_t samples = 0;
};
MCResult average_skew_mc(const ProfileFunction& f, double e, int r,
                         std::int64_t n_alpha, std::int64_t n_omega,
                         std::int64_t n_inner, std::uint64_t seed);

// One grid point of a direct-vs-averaged comparison.
struct AverageRow {
    double e = 0.0;
    double direct = 0.0;    // finite-volume value for the deterministic model
    double averaged = 0.0;  // family average at the same energy
    double gap() const { return std::fabs(direct - averaged); }
};

struct AverageReport {
    std::vector<AverageRow> rows;
};

}  // namespace jacobi

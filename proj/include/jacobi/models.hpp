#pragma once

// Generators for every coefficient family the library studies, the sampling
// profile f, skew-shift orbits, and star-discrepancy diagnostics.  Models
// are described by a small text language so runs are fully reproducible:
//   free | constant:c | periodic:b1,b2,... | anderson:seed,coupling |
//   sparse:h | decaying:c,p | nrho:rho | skew:r,alpha[,w0,w1,...]
// Profiles:
//   trig:a0[,a1,b1,a2,b2,...] | linear:x0,v0,x1,v1,... | table:path | identity

#include <cstdint>
#include <string>
#include <vector>

#include "jacobi/lattice.hpp"

namespace jacobi {

// Sampling function f: [0,1] -> R.  Either a trigonometric polynomial
// a0 + sum_k [ a_k cos(2 pi k x) + b_k sin(2 pi k x) ] or a piecewise-linear
// table whose breakpoints start at 0 and end at 1.  Evaluation folds the
// argument mod 1.  max/min over [0,1] are cached at construction: exact at
// the nodes for tables, grid search (2^16 cells) plus local ternary
// refinement for trig polynomials (~1e-9 accuracy).
class ProfileFunction {
public:
    // cos_coeffs = {a0, a1, ...}, sin_coeffs = {b1, ...}.
    static ProfileFunction trig(std::vector<double> cos_coeffs,
                                std::vector<double> sin_coeffs);
    // Piecewise-linear from breakpoints xs (ascending, xs[0]=0, xs.back()=1).
    static ProfileFunction table(std::vector<double> xs, std::vector<double> vals);
    // The table {0,1} -> {0,1}: f(x) = x.
    static ProfileFunction identity();
    // Text forms listed at the top of this header; "table:path" reads a
    // two-column (breakpoint, value) text file.
    static ProfileFunction parse(const std::string& descriptor);

    double operator()(double x) const;
    double fmax() const { return fmax_; }
    double fmin() const { return fmin_; }
    const std::string& descriptor() const { return desc_; }

private:
    ProfileFunction() = default;
    void find_extrema();

    bool is_trig_ = false;
    std::vector<double> cos_;   // a0, a1, ...
    std::vector<double> sin_;   // b1, ...
    std::vector<double> xs_;    // table breakpoints
    std::vector<double> vals_;  // table values
    double fmax_ = 0.0;
    double fmin_ = 0.0;
    std::string desc_;
};

// Parameters of the torus map T_alpha(w)_0 = w_0 + alpha,
// T_alpha(w)_k = w_k + w_{k-1} (1 <= k <= r-1), all mod 1.
struct SkewShiftState {
    int r = 1;
    double alpha = 0.0;
    std::vector<double> omega;  // size r, entries in [0,1)

    void validate() const;  // throws std::invalid_argument on bad fields
};

// Signed binomial coefficient n over j (j >= 0) in 128-bit arithmetic;
// throws std::overflow_error when the exact value does not fit.
__int128 binomial128(std::int64_t n, int j);

// Last coordinate (index r-1) of T_alpha^n applied to omega, via the closed
// form (T^n w)_k = sum_j C(n,j) w_{k-j} + alpha C(n,k+1) mod 1, evaluated
// with exact integer-times-double fractional parts.  Requires r >= 1.
double skew_coordinate(const SkewShiftState& st, std::int64_t n);

// Coefficient families.  All have a == 1; b is bounded by the descriptor
// parameters, and c0 = max(1.5, sup|b|).
Coefficients gen_free();
Coefficients gen_constant(double c);
Coefficients gen_periodic(std::vector<double> bs);
// b(n) uniform on [-coupling, coupling], counter-based RNG keyed by
// (seed, n): bit-reproducible at every index independently.
Coefficients gen_anderson(std::uint64_t seed, double coupling);
// b(n) = height exactly at perfect squares n >= 0, else 0.
Coefficients gen_sparse_squares(double height);
// b(n) = c / (1 + |n|)^p.
Coefficients gen_decaying(double c, double p);
// b(n) = f(|n|^rho mod 1); the fractional part comes from 113-bit
// arithmetic so large indices keep ~1e-13 accuracy.
Coefficients gen_nrho(const ProfileFunction& f, double rho);
// b(n) = f(last coordinate of T_alpha^n omega); r = 0 degenerates to the
// constant potential f(alpha).
Coefficients gen_skewshift(const ProfileFunction& f, const SkewShiftState& st);

// Builds any model from its text descriptor.  nrho and skew need the
// profile argument; passing nullptr for them is an error.
Coefficients make_model(const std::string& descriptor,
                        const ProfileFunction* f = nullptr);

// Mod-1 sequences whose equidistribution the discrepancy diagnostic
// measures: x_n = frac(n^rho), frac(n alpha), or the skew orbit coordinate.
struct SequenceSpec {
    enum class Kind { nrho, rotation, skew_last };

    Kind kind = Kind::nrho;
    double rho = 0.5;
    double alpha = 0.0;
    SkewShiftState st;

    // "nrho:rho" | "rotation:alpha" | "skew:r,alpha[,w0,...]"
    static SequenceSpec parse(const std::string& descriptor);
    double value(std::int64_t n) const;
};

// Exact star discrepancy of {x_1, ..., x_N} against the uniform law,
// computed by sorting: D* = max_i max(i/N - x_(i), x_(i) - (i-1)/N).
double star_discrepancy(const SequenceSpec& seq, std::int64_t n);

}  // namespace jacobi

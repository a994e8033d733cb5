#pragma once
// Bounded Jacobi operators J = (a, b) acting on the two-sided lattice:
//   (J u)(n) = a(n) u(n+1) + b(n) u(n) + a(n-1) u(n-1),
// with 1/c0 <= a(n) <= c0 and |b(n)| <= c0 for a bound constant c0 > 1.
// Operators are represented by a pure coefficient rule, so shifting and
// reflecting cost O(1) and every model can be evaluated at arbitrary n.

#include <cassert>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace jacobi {

// Spectral parameter z restricted to the closed upper half plane.
struct ComplexEnergy {
    double re = 0.0;
    double im = 0.0;
    ComplexEnergy() = default;
    ComplexEnergy(double re_, double im_ = 0.0) : re(re_), im(im_) {
        if (!(im >= 0.0)) throw std::domain_error("ComplexEnergy: Im z must be >= 0");
    }
    std::complex<double> cplx() const { return {re, im}; }
    bool is_real() const { return im == 0.0; }
};

struct CoeffPair {
    double a = 1.0;
    double b = 0.0;
};

class Coefficients {
  public:
    using Rule = std::function<CoeffPair(std::int64_t)>;

    Coefficients() = default;  // the free operator a=1, b=0
    Coefficients(Rule rule, double c0, std::string descriptor)
        : rule_(std::move(rule)), c0_(c0), base_(std::move(descriptor)) {
        if (!(c0_ > 1.0)) throw std::invalid_argument("Coefficients: c0 must exceed 1");
        if (!rule_) throw std::invalid_argument("Coefficients: empty rule");
    }

    CoeffPair at(std::int64_t n) const {
        if (!rule_) return {1.0, 0.0};
        CoeffPair p = rule_(n + offset_);
        assert(p.a >= 1.0 / c0_ * (1.0 - 1e-12) && p.a <= c0_ * (1.0 + 1e-12) &&
               p.b >= -c0_ * (1.0 + 1e-12) && p.b <= c0_ * (1.0 + 1e-12));
        return p;
    }
    double a(std::int64_t n) const { return at(n).a; }
    double b(std::int64_t n) const { return at(n).b; }

    double c0() const { return c0_; }
    std::int64_t offset() const { return offset_; }

    // Base descriptor plus the cumulative shift, e.g. "anderson:42,1@+5".
    std::string descriptor() const;
    const std::string& base_descriptor() const { return base_; }

  private:
    Rule rule_;
    double c0_ = 1.5;
    std::string base_ = "free";
    std::int64_t offset_ = 0;

    friend Coefficients shift(const Coefficients& j, std::int64_t n);
};

// The shifted operator (S^-n J S^n): coefficients read at index m + n.
Coefficients shift(const Coefficients& j, std::int64_t n);

// Reflection through the bond between -1 and 0: a'(n) = a(-n-2),
// b'(n) = b(-n-1).  Restricting the reflected operator to n >= 0 gives the
// left half line of J, which is how the m-function m_- is computed.
Coefficients reflect(const Coefficients& j);

// A finite box of coefficients: diag[k] = b(n0+k) for k < len and
// offdiag[k] = a(n0+k) for k < len-1.
struct Window {
    std::int64_t offset = 0;
    std::vector<double> diag;
    std::vector<double> offdiag;

    std::int64_t length() const { return static_cast<std::int64_t>(diag.size()); }
    void validate() const;
};

Window extract_window(const Coefficients& j, std::int64_t n0, std::int64_t len);

// Same operator, but with coefficients for [n0, n0+len) precomputed into an
// array.  Grid sweeps that revisit the same sites for many spectral
// parameters should materialize once; outside the cached range the original
// rule is consulted.
Coefficients materialize(const Coefficients& j, std::int64_t n0, std::int64_t len);

// Truncation of the product-topology metric
//   d(J1, J2) = sum_n 2^-|n| (|b1(n)-b2(n)| + |a1(n)-a2(n)|)
// to |n| <= k.  The tail it discards is bounded by 2^(1-k) * 4 * max(c0).
double metric_d(const Coefficients& j1, const Coefficients& j2, std::int64_t k);

} // namespace jacobi

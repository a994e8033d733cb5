#include "jacobi/transfer.hpp"

#include <cmath>
#include <stdexcept>

namespace jacobi {

double Mat2c::frobenius() const {
    return std::sqrt(std::norm(e00) + std::norm(e01) + std::norm(e10) +
                     std::norm(e11));
}

Mat2c step_matrix(ComplexEnergy z, double a, double b) {
    if (!(a > 0.0)) throw std::domain_error("step_matrix: off-diagonal must be positive");
    const cplx zb = (z.cplx() - b) / a;
    return {zb, cplx{-1.0 / a}, cplx{a}, cplx{0.0}};
}

void ScaledProduct::absorb(const Mat2c& m) {
    mat = m * mat;
    // Rescale lazily: only when the norm leaves [1/2, 2].  Squared norm is
    // cheaper, so compare against [1/4, 4].
    const double n2 = std::norm(mat.e00) + std::norm(mat.e01) +
                      std::norm(mat.e10) + std::norm(mat.e11);
    if (n2 > 4.0 || n2 < 0.25) {
        const double nrm = std::sqrt(n2);
        if (!(nrm > 0.0)) throw std::domain_error("ScaledProduct: vanished product");
        const double inv = 1.0 / nrm;
        mat.e00 *= inv;
        mat.e01 *= inv;
        mat.e10 *= inv;
        mat.e11 *= inv;
        logscale += std::log(nrm);
    }
}

double ScaledProduct::log_norm() const {
    return std::log(mat.frobenius()) + logscale;
}

ScaledProduct transfer_product(const Coefficients& j, ComplexEnergy z,
                               std::int64_t n0, std::int64_t len) {
    if (len < 0) throw std::invalid_argument("transfer_product: negative length");
    ScaledProduct p;
    for (std::int64_t k = 0; k < len; ++k) {
        const CoeffPair cp = j.at(n0 + k);
        p.absorb(step_matrix(z, cp.a, cp.b));
    }
    return p;
}

double lyapunov_finite(const Coefficients& j, ComplexEnergy z, std::int64_t n0,
                       std::int64_t len) {
    if (len < 1) throw std::invalid_argument("lyapunov_finite: length must be >= 1");
    return transfer_product(j, z, n0, len).log_norm() / static_cast<double>(len);
}

namespace {

// Advance one scaled solution of the recurrence
//   u(n+1) = ((z - b(n)) u(n) - a(n-1) u(n-1)) / a(n)
// and renormalize when the working pair drifts away from unit size.
void advance(ScaledPair& u, cplx z, double a_prev, double a, double b) {
    const cplx next = ((z - b) * u.val - a_prev * u.prev) / a;
    u.prev = u.val;
    u.val = next;
    const double m = std::max(std::abs(u.val), std::abs(u.prev));
    if (m > 2.0 || (m < 0.5 && m > 0.0)) {
        const double inv = 1.0 / m;
        u.val *= inv;
        u.prev *= inv;
        u.logscale += std::log(m);
    }
}

}  // namespace

CosSin cosine_sine(const Coefficients& j, ComplexEnergy ze, std::int64_t n) {
    if (n < 0) throw std::invalid_argument("cosine_sine: index must be >= 0");
    const cplx z = ze.cplx();
    CosSin out;
    out.c = {cplx{1.0}, cplx{0.0}, 0.0};
    // Seeding prev = -1 makes the first step produce s(z, 1) = 1/a(0)
    // with the a(-1)-independent convention a_prev = 1 at n = 0.
    out.s = {cplx{0.0}, cplx{-1.0}, 0.0};
    double a_prev = 1.0;
    for (std::int64_t k = 0; k < n; ++k) {
        const CoeffPair cp = j.at(k);
        if (!(cp.a > 0.0)) throw std::domain_error("cosine_sine: off-diagonal must be positive");
        advance(out.c, z, a_prev, cp.a, cp.b);
        advance(out.s, z, a_prev, cp.a, cp.b);
        a_prev = cp.a;
    }
    return out;
}

}  // namespace jacobi

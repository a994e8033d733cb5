#include "jacobi/weyl.hpp"

#include <cmath>
#include <vector>

#include "jacobi/util.hpp"

namespace jacobi {

namespace {

constexpr std::int64_t kDepthCap = 1000000;

// Continued fraction with tail 0 at the given depth.  Algebraically this is
// the [0, depth-1] box resolvent entry at site 0, assembled right-to-left.
cplx cf_eval(const Coefficients& j, cplx z, std::int64_t depth) {
    cplx m = 0.0;
    for (std::int64_t k = depth - 1; k >= 0; --k) {
        const CoeffPair cp = j.at(k);
        m = 1.0 / (cp.b - z - cp.a * cp.a * m);
    }
    return m;
}

}  // namespace

MFunctionValue m_plus(const Coefficients& j, ComplexEnergy z, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("m_plus: tol must be > 0");
    if (!(z.im > 0.0)) throw std::domain_error("m_plus: requires Im z > 0");
    const cplx zz = z.cplx();

    std::int64_t depth = 32;
    cplx prev = cf_eval(j, zz, depth);
    for (;;) {
        const std::int64_t next = depth * 2;
        const cplx cur = cf_eval(j, zz, next);
        const double diff = std::abs(cur - prev);
        if (diff < tol) {
            // Same truncation box, opposite elimination order: an
            // independent route that catches recursion mistakes.
            const cplx cross = m_plus_box(j, z, next);
            MFunctionValue out;
            out.value = cur;
            out.method = MFunctionValue::Method::continued_fraction;
            out.depth = next;
            out.est_error = diff + std::abs(cur - cross);
            return out;
        }
        prev = cur;
        depth = next;
        if (depth >= kDepthCap) {
            throw ConvergenceError(
                "m_plus: continued fraction not settled at depth cap", cur, depth);
        }
    }
}

cplx m_plus_box(const Coefficients& j, ComplexEnergy z, std::int64_t boxsize) {
    if (boxsize < 1) throw std::invalid_argument("m_plus_box: box size must be >= 1");
    if (!(z.im > 0.0)) throw std::domain_error("m_plus_box: requires Im z > 0");
    const cplx zz = z.cplx();

    // Thomas elimination on (J_[0, boxsize-1] - z) u = delta_0.  Pivots stay
    // in [Im z, |b| + a^2/Im z], so no pivoting is needed.
    std::vector<cplx> upper(static_cast<std::size_t>(boxsize));
    std::vector<cplx> rhs(static_cast<std::size_t>(boxsize));
    CoeffPair cp = j.at(0);
    cplx denom = cp.b - zz;
    upper[0] = boxsize > 1 ? cplx{cp.a} / denom : cplx{0.0};
    rhs[0] = 1.0 / denom;
    double a_prev = cp.a;
    for (std::int64_t k = 1; k < boxsize; ++k) {
        cp = j.at(k);
        denom = (cp.b - zz) - a_prev * upper[static_cast<std::size_t>(k - 1)];
        upper[static_cast<std::size_t>(k)] =
            k + 1 < boxsize ? cplx{cp.a} / denom : cplx{0.0};
        rhs[static_cast<std::size_t>(k)] =
            -a_prev * rhs[static_cast<std::size_t>(k - 1)] / denom;
        a_prev = cp.a;
    }
    cplx u = rhs[static_cast<std::size_t>(boxsize - 1)];
    for (std::int64_t k = boxsize - 2; k >= 0; --k) {
        u = rhs[static_cast<std::size_t>(k)] - upper[static_cast<std::size_t>(k)] * u;
    }
    return u;
}

MFunctionValue m_minus(const Coefficients& j, ComplexEnergy z, double tol) {
    return m_plus(reflect(j), z, tol);
}

cplx box_m(const Coefficients& j, ComplexEnergy z, std::int64_t n) {
    if (n < 0) throw std::invalid_argument("box_m: box end must be >= 0");
    if (!(z.im > 0.0)) throw std::domain_error("box_m: requires Im z > 0");
    const cplx zz = z.cplx();
    CoeffPair cp = j.at(0);
    cplx g = 1.0 / (cp.b - zz);
    double a_prev = cp.a;
    for (std::int64_t k = 1; k <= n; ++k) {
        cp = j.at(k);
        g = 1.0 / (cp.b - zz - a_prev * a_prev * g);
        a_prev = cp.a;
    }
    return g;
}

double lyap_via_m(const Coefficients& j, ComplexEnergy z, std::int64_t n,
                  double tol) {
    if (n < 1) throw std::invalid_argument("lyap_via_m: length must be >= 1");
    std::vector<double> terms(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t k) {
        const MFunctionValue m =
            m_plus(shift(j, static_cast<std::int64_t>(k)), z, tol);
        terms[k] = std::log(j.at(static_cast<std::int64_t>(k)).a) +
                   std::log(std::abs(m.value));
    });
    return -pairwise_sum(terms) / static_cast<double>(n);
}

namespace {

// Backward sweep for the decaying solution on [-1, box]: u(box+1) = 0,
// u(box) = 1, then the three-term recurrence downward with on-the-fly
// rescaling.  Returns u(n)/u(-1) split into log-modulus and phase.
struct RatioParts {
    double log_mod;
    cplx phase;
};

RatioParts u_ratio_from_box(const Coefficients& j, cplx zz, std::int64_t n,
                            std::int64_t box) {
    cplx hi = 0.0;         // u(k+1)
    cplx lo = 1.0;         // u(k)
    double logscale = 0.0;
    cplx val_n = 0.0;
    double ls_n = 0.0;
    cplx val_m1 = 0.0;
    double ls_m1 = 0.0;
    for (std::int64_t k = box; k >= 0; --k) {
        if (k == n) {
            val_n = lo;
            ls_n = logscale;
        }
        const CoeffPair cp = j.at(k);
        const double am1 = j.at(k - 1).a;
        const cplx down = ((zz - cp.b) * lo - cp.a * hi) / am1;
        hi = lo;
        lo = down;
        const double m = std::max(std::abs(hi), std::abs(lo));
        if (m > 2.0 || (m < 0.5 && m > 0.0)) {
            hi /= m;
            lo /= m;
            logscale += std::log(m);
        }
    }
    val_m1 = lo;
    ls_m1 = logscale;
    const cplx q = val_n / val_m1;
    return {std::log(std::abs(q)) + (ls_n - ls_m1), q / std::abs(q)};
}

}  // namespace

UPlusReport u_plus_check(const Coefficients& j, ComplexEnergy z, std::int64_t n) {
    if (n < 0) throw std::invalid_argument("u_plus_check: index must be >= 0");
    if (!(z.im > 0.0)) throw std::domain_error("u_plus_check: requires Im z > 0");
    const cplx zz = z.cplx();

    // Product side: a(k-1) m_plus(z, shift(J, k)) over k = 0..n.
    std::vector<double> logs(static_cast<std::size_t>(n) + 1);
    std::vector<cplx> phases(static_cast<std::size_t>(n) + 1);
    parallel_for(static_cast<std::size_t>(n) + 1, [&](std::size_t k) {
        const cplx m =
            m_plus(shift(j, static_cast<std::int64_t>(k)), z, 1e-12).value;
        const cplx am = j.at(static_cast<std::int64_t>(k) - 1).a * m;
        logs[k] = std::log(std::abs(am));
        phases[k] = am / std::abs(am);
    });
    const double log_prod = pairwise_sum(logs);
    cplx phase_prod = 1.0;
    for (const cplx& p : phases) phase_prod *= p;

    // Solution side: enlarge the truncation box until u(n)/u(-1) settles.
    std::int64_t box = n + 64;
    RatioParts cur = u_ratio_from_box(j, zz, n, box);
    for (;;) {
        const std::int64_t next = box * 2;
        const RatioParts refined = u_ratio_from_box(j, zz, n, next);
        const bool settled = std::fabs(refined.log_mod - cur.log_mod) < 1e-9 &&
                             std::abs(refined.phase - cur.phase) < 1e-9;
        cur = refined;
        box = next;
        if (settled) break;
        if (box >= 4 * kDepthCap) {
            throw ConvergenceError("u_plus_check: backward sweep not settled",
                                   cur.phase, box);
        }
    }

    UPlusReport rep;
    rep.log_modulus_u = cur.log_mod;
    rep.log_modulus_prod = log_prod;
    rep.modulus_rel_error = std::fabs(std::expm1(cur.log_mod - log_prod));
    rep.sign_ratio = std::exp(cur.log_mod - log_prod) * cur.phase / phase_prod;
    rep.sign = rep.sign_ratio.real() >= 0.0 ? 1 : -1;
    rep.box_size = box;
    return rep;
}

double reflectionless_defect(const Coefficients& j, double e, double eta,
                             double tol) {
    if (!(eta > 0.0)) throw std::domain_error("reflectionless_defect: requires eta > 0");
    const ComplexEnergy z{e, eta};
    const cplx mp = m_plus(j, z, tol).value;
    // The left half-line enters through -1/(a(-1)^2 g), where g is the
    // corner resolvent of the reflected operator and a(-1) is the bond the
    // split cuts.  With that normalization the two sides of a two-sided
    // operator with purely absolutely continuous spectrum cancel:
    // m_plus(E+i0) = -conj(m_left(E+i0)) on the shared bands (exactly 0 for
    // the free operator at every |E| < 2), so the returned modulus measures
    // the failure of that cancellation at distance eta from the axis.
    const cplx gm = m_minus(j, z, tol).value;
    const double al = j.a(-1);
    const cplx m_left = -1.0 / (al * al * gm);
    return std::abs(mp + std::conj(m_left));
}

}  // namespace jacobi

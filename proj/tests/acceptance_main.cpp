// End-to-end quantitative gate for the library.  Each numbered check prints
// exactly one line, "A<k> PASS ..." or "A<k> FAIL ...", with the measured
// numbers inline; the process exits nonzero if any check fails.
//
//   --skip-slow   run everything except the long-horizon check A9
//   --only-slow   run only A9
//
// The checks mix exact combinatorial identities, closed-form constant-
// coefficient oracles, and scaled-down quantitative comparisons between
// direct finite-volume spectral data and parameter-averaged families.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <numbers>
#include <string>
#include <vector>

#include "jacobi/averaging.hpp"
#include "jacobi/eigen.hpp"
#include "jacobi/lattice.hpp"
#include "jacobi/measures.hpp"
#include "jacobi/models.hpp"
#include "jacobi/transfer.hpp"
#include "jacobi/util.hpp"
#include "jacobi/weyl.hpp"

using namespace jacobi;

namespace {

int g_failures = 0;

void report(const char* name, bool ok, const std::string& detail) {
    std::printf("%s %s %s\n", name, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

// ---------------------------------------------------------------------------

// Free-operator IDS against the arccos closed form on a dense grid.
void check_a1() {
    const Window w = extract_window(gen_free(), 0, 2000);
    double sup = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double e = -3.0 + 6.0 * double(i) / 400.0;
        const double exact =
            std::acos(std::clamp(-e / 2.0, -1.0, 1.0)) / std::numbers::pi;
        sup = std::max(sup, std::fabs(ids_estimate(w, e) - exact));
    }
    report("A1", sup <= 2e-3,
           fmt("free-operator IDS vs closed form: sup gap %.3g (<= 2e-3), N=2000, "
               "401 grid points",
               sup));
}

// Exact finite-volume identity: eigenvalue log-sum minus mean log a equals
// (1/N) log|c(z,N)| from the recurrence.
void check_a2() {
    const Coefficients j = materialize(gen_anderson(42, 1.0), 0, 500);
    const std::int64_t n = 500;
    const DOSMeasure nu = dos_measure(j, n, 1e-12);
    const double mla = mean_log_a(j, n);
    double worst = 0.0;
    for (int s = 0; s < 20; ++s) {
        const double e = -3.0 + 6.0 * u01_stream(2024, 0, std::uint64_t(s));
        const double eta = 0.1 + 0.9 * u01_stream(2024, 1, std::uint64_t(s));
        const ComplexEnergy z{e, eta};
        const double rhs = thouless_rhs(nu, mla, z);
        const double lhs = cosine_sine(j, z, n).c.log_abs() / double(n);
        worst = std::max(worst, std::fabs(lhs - rhs));
    }
    report("A2", worst <= 1e-8,
           fmt("box log-potential identity: worst |(1/N)log|c| - rhs| = %.3g "
               "(<= 1e-8) over 20 random z, N=500",
               worst));
}

// The same identity used asymptotically: at eta = 0.5 the product-norm route
// and the eigenvalue route approximate the same exponent.
void check_a3() {
    const std::int64_t n = 10000;
    const Coefficients j = materialize(gen_anderson(42, 1.0), 0, n);
    const DOSMeasure nu = dos_measure(j, n);
    const double mla = mean_log_a(j, n);
    double sup = 0.0;
    std::vector<double> gaps(101);
    parallel_for(101, [&](std::int64_t i) {
        const ComplexEnergy z{-3.0 + 6.0 * double(i) / 100.0, 0.5};
        gaps[std::size_t(i)] =
            std::fabs(lyapunov_finite(j, z, 0, n) - thouless_rhs(nu, mla, z));
    });
    for (double g : gaps) sup = std::max(sup, g);
    report("A3", sup <= 1e-2,
           fmt("transfer norm vs eigenvalue log-potential at eta=0.5: sup gap "
               "%.3g (<= 1e-2), N=1e4, 101 grid points",
               sup));
}

// The m-function route to the exponent agrees with the transfer route.
void check_a4() {
    const std::int64_t n = 10000;
    const Coefficients j = materialize(gen_anderson(42, 1.0), 0, n);
    double sup = 0.0;
    std::vector<double> gaps(101);
    for (std::int64_t i = 0; i <= 100; ++i) {  // lyap_via_m parallelizes inside
        const ComplexEnergy z{-3.0 + 6.0 * double(i) / 100.0, 0.5};
        gaps[std::size_t(i)] =
            std::fabs(lyap_via_m(j, z, n, 1e-10) - lyapunov_finite(j, z, 0, n));
    }
    for (double g : gaps) sup = std::max(sup, g);
    report("A4", sup <= 1e-2,
           fmt("m-function route vs transfer route at eta=0.5: sup gap %.3g "
               "(<= 1e-2), N=1e4, 101 grid points",
               sup));
}

// Half-line m-function: golden-ratio fixed point, Herglotz property, and the
// resolvent bound on a thousand random samples.
void check_a5() {
    const MFunctionValue m0 = m_plus(gen_free(), ComplexEnergy{0.0, 1.0}, 1e-12);
    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    const double fixed_gap = std::abs(m0.value - cplx{0.0, golden});
    bool herglotz_ok = true, bound_ok = true;
    for (int s = 0; s < 1000; ++s) {
        const Coefficients j = gen_anderson(3000 + std::uint64_t(s),
                                            0.2 + u01_stream(7, 0, std::uint64_t(s)));
        const double e = -3.0 + 6.0 * u01_stream(7, 1, std::uint64_t(s));
        const double eta = 0.1 + 0.9 * u01_stream(7, 2, std::uint64_t(s));
        const cplx m = m_plus(j, ComplexEnergy{e, eta}, 1e-11).value;
        if (!(m.imag() > 0.0)) herglotz_ok = false;
        if (!(std::abs(m) <= 1.0 / eta + 1e-12)) bound_ok = false;
    }
    const bool ok = fixed_gap <= 1e-8 && herglotz_ok && bound_ok;
    report("A5", ok,
           fmt("free m(i) fixed-point gap %.3g (<= 1e-8); ", fixed_gap) +
               "Herglotz " + (herglotz_ok ? "yes" : "NO") + ", |m|<=1/eta " +
               (bound_ok ? "yes" : "NO") + " on 1000 random samples");
}

// Slowly varying sqrt-index potential: the exponent vanishes across the
// whole shared band of the family.
void check_a6() {
    const std::int64_t n = 1000000;
    const Coefficients j = materialize(gen_nrho(ProfileFunction::identity(), 0.5), 0, n);
    std::vector<double> vals(31);
    parallel_for(31, [&](std::int64_t i) {
        const double e = -0.95 + (1.95 - (-0.95)) * double(i) / 30.0;
        vals[std::size_t(i)] = lyapunov_finite(j, ComplexEnergy{e}, 0, n);
    });
    const double worst = *std::max_element(vals.begin(), vals.end());
    report("A6", worst <= 0.02,
           fmt("shared-band exponent of the sqrt-index model: max L = %.3g "
               "(<= 0.02) over 31 points in [-0.95,1.95], N=1e6",
               worst));
}

// Outside the shared band the direct exponent matches the family average;
// the averages themselves are pinned against offline node-doubled values.
void check_a7() {
    const std::int64_t n = 1000000;
    const ProfileFunction id = ProfileFunction::identity();
    const Coefficients j = materialize(gen_nrho(id, 0.5), 0, n);
    const double es[3] = {2.5, 3.0, 4.0};
    const double frozen[3] = {0.2328679513998633, 0.6512029728578310,
                              1.1525269997036813};
    double worst_gap = 0.0, worst_fix = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double direct = lyapunov_finite(j, ComplexEnergy{es[i]}, 0, n);
        const QuadResult avg = average_r0(id, es[i], AvgQuantity::lyapunov, 4096);
        worst_gap = std::max(worst_gap, std::fabs(direct - avg.value));
        worst_fix = std::max(worst_fix, std::fabs(avg.value - frozen[i]));
    }
    report("A7", worst_gap <= 0.05 && worst_fix <= 1e-6,
           fmt("direct exponent vs averaged family at E in {2.5,3,4}: worst gap "
               "%.3g (<= 0.05); quadrature vs frozen values %.3g (<= 1e-6)",
               worst_gap, worst_fix));
}

// Same comparison for the integrated density of states.
void check_a8() {
    const std::int64_t n = 100000;
    const ProfileFunction id = ProfileFunction::identity();
    const Window w = extract_window(gen_nrho(id, 0.5), 0, n);
    const double es[2] = {0.0, 1.0};
    const double frozen[2] = {0.4186242102791226, 0.5813757897208774};
    double worst_gap = 0.0, worst_fix = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double direct = ids_estimate(w, es[i]);
        const QuadResult avg = average_r0(id, es[i], AvgQuantity::ids, 4096);
        worst_gap = std::max(worst_gap, std::fabs(direct - avg.value));
        worst_fix = std::max(worst_fix, std::fabs(avg.value - frozen[i]));
    }
    report("A8", worst_gap <= 0.02 && worst_fix <= 1e-8,
           fmt("direct IDS vs averaged family at E in {0,1}: worst gap %.3g "
               "(<= 0.02); quadrature vs frozen values %.3g (<= 1e-8)",
               worst_gap, worst_fix));
}

// Long-horizon check: the exponent of the n^rho cosine model depends only on
// the integer part of rho, and both fractional powers match the sampled
// torus-family average within its error bars.
void check_a9() {
    const std::int64_t n = 1000000;
    const ProfileFunction f = ProfileFunction::parse("trig:0,1");
    const Coefficients j13 = materialize(gen_nrho(f, 1.3), 0, n);
    const Coefficients j17 = materialize(gen_nrho(f, 1.7), 0, n);
    bool ok = true;
    std::string detail;
    for (double e : {3.0, 3.5}) {
        const double l13 = lyapunov_finite(j13, ComplexEnergy{e}, 0, n);
        const double l17 = lyapunov_finite(j17, ComplexEnergy{e}, 0, n);
        const MCResult mc = average_skew_mc(f, e, 1, 64, 4, 100000, 20240817);
        // error bars: three standard errors plus a finite-volume allowance
        // shared by the direct runs and the per-sample inner products
        const double bars = 3.0 * mc.se + 0.02;
        const bool here = std::fabs(l13 - l17) <= 0.05 &&
                          std::fabs(l13 - mc.mean) <= bars &&
                          std::fabs(l17 - mc.mean) <= bars;
        ok = ok && here;
        detail += fmt("E=%.1f: L(rho=1.3)=%.4f L(rho=1.7)=%.4f ", e, l13, l17) +
                  fmt("mc=%.4f+-%.4f; ", mc.mean, mc.se);
    }
    report("A9", ok, detail + "(|dL| <= 0.05, both within mc bars 3*se+0.02)");
}

// Deviation-density statistic: exact square count, and the decaying model's
// density bound.
void check_a10() {
    const double sparse = drr_statistic(gen_sparse_squares(1.0), 100000, 0.5);
    const double dec = drr_statistic(gen_decaying(5.0, 0.5), 1000000, 0.1);
    const bool ok = sparse == 0.00316 && dec <= 3e-3;
    report("A10", ok,
           fmt("deviation densities: sparse squares %.5f (= 0.00316 exactly), "
               "decaying %.4g (<= 3e-3)",
               sparse, dec));
}

// Exact matrix identities on a thousand random cases.  Note on orientation:
// the one-step matrices here carry the minus sign in the (0,1) entry, so
// each step has determinant +1 and the reconstructed product determinant is
// checked against +1 (the variant with +1 in the (0,1) slot flips the
// determinant to (-1)^N and is inconsistent with c(z,2) = z^2 - 1 for the
// free operator, which this suite also pins).
void check_a11() {
    int det_cases = 0;
    double worst_det = 0.0, worst_cnsn = 0.0, worst_ratio = 0.0, worst_dom = -1e300;
    for (int s = 0; s < 1000; ++s) {
        const std::uint64_t u = std::uint64_t(s);
        const Coefficients j =
            gen_anderson(5000 + u, 0.2 + 1.3 * u01_stream(11, 0, u));
        const double e = -3.0 + 6.0 * u01_stream(11, 1, u);
        const double eta = u01_stream(11, 2, u);
        const ComplexEnergy z{e, eta};

        // (a) unit determinant, where the 2x2 cancellation is resolvable
        {
            const std::int64_t n = 1 + std::int64_t(25.0 * u01_stream(11, 3, u));
            const ScaledProduct p = transfer_product(j, z, 0, n);
            if (std::fabs(p.logscale) <= 5.0) {
                ++det_cases;
                const cplx det = p.mat.det() * std::exp(2.0 * p.logscale);
                worst_det = std::max(worst_det, std::abs(det - cplx{1.0}));
            }
        }

        // (b) product entries vs the recurrence pair, relative to the norm
        {
            const std::int64_t n = 1 + std::int64_t(150.0 * u01_stream(11, 4, u));
            const ScaledProduct p = transfer_product(j, z, 0, n);
            const CosSin cs = cosine_sine(j, z, n);
            const double an1 = j.a(n - 1);
            const cplx c_n = cs.c.val * std::exp(cs.c.logscale - p.logscale);
            const cplx c_n1 = cs.c.prev * std::exp(cs.c.logscale - p.logscale);
            const cplx s_n = cs.s.val * std::exp(cs.s.logscale - p.logscale);
            const cplx s_n1 = cs.s.prev * std::exp(cs.s.logscale - p.logscale);
            const double scale = p.mat.frobenius();
            double gap = std::abs(p.mat.e00 - c_n) / scale;
            gap = std::max(gap, std::abs(p.mat.e01 + s_n) / scale);
            gap = std::max(gap, std::abs(p.mat.e10 - an1 * c_n1) / scale);
            gap = std::max(gap, std::abs(p.mat.e11 + an1 * s_n1) / scale);
            worst_cnsn = std::max(worst_cnsn, gap);

            // (d) first-column entry never exceeds the product norm
            worst_dom = std::max(worst_dom, cs.c.log_abs() - p.log_norm());
        }

        // (c) corner-resolvent ratio identity
        {
            const std::int64_t n = std::int64_t(200.0 * u01_stream(11, 5, u));
            const ComplexEnergy zc{e, 0.1 + 0.9 * eta};
            const CosSin cs = cosine_sine(j, zc, n + 1);
            const cplx ratio = cs.c.val / cs.c.prev;
            const cplx rhs = -1.0 / (j.a(n) * box_m(j, zc, n));
            worst_ratio = std::max(worst_ratio, std::abs(ratio - rhs) / std::abs(rhs));
        }
    }
    const bool ok = det_cases >= 500 && worst_det <= 1e-10 && worst_cnsn <= 1e-10 &&
                    worst_ratio <= 1e-10 && worst_dom <= 1e-12;
    report("A11", ok,
           fmt("unit-determinant convention: worst |det-1| = %.3g over %.0f guarded "
               "cases; ",
               worst_det, double(det_cases)) +
               fmt("entries-vs-recurrence %.3g, corner-ratio %.3g (<= 1e-10); ",
                   worst_cnsn, worst_ratio) +
               fmt("entry domination slack %.3g (<= 1e-12)", worst_dom));
}

// Measure machinery: finite exactness for a periodic model and the
// contamination bound for sparse bumps.
void check_a12() {
    const Coefficients per = gen_periodic({0.7, -0.3, 1.1});
    const std::int64_t k = 8;
    const EmpiricalMeasure big = empirical_measure(per, 30000, k);
    const EmpiricalMeasure exact = empirical_measure(per, 3, k);
    const double dist = cylinder_distance(big, exact, 2);

    const double conv = convergence_in_probability(gen_sparse_squares(1.0),
                                                   Target::free_torus(), 100000, 0.5, 8);
    const bool ok = dist <= 1e-12 && conv <= 0.06;
    report("A12", ok,
           fmt("period-3 empirical moments vs exact atoms: %.3g (<= 1e-12); "
               "sparse far-from-free fraction %.4g (<= 0.06)",
               dist, conv));
}

// Equidistribution of the sqrt-index sequence.
void check_a13() {
    const double d = star_discrepancy(SequenceSpec::parse("nrho:0.5"), 1000000);
    report("A13", d <= 0.01,
           fmt("star discrepancy of frac(sqrt(n)), N=1e6: %.4g (<= 0.01)", d));
}

}  // namespace

int main(int argc, char** argv) {
    bool skip_slow = false, only_slow = false;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--skip-slow") == 0) skip_slow = true;
        else if (std::strcmp(argv[i], "--only-slow") == 0) only_slow = true;
        else {
            std::fprintf(stderr, "unknown option '%s'\n", argv[i]);
            return 64;
        }
    }

    if (!only_slow) {
        check_a1();
        check_a2();
        check_a3();
        check_a4();
        check_a5();
        check_a6();
        check_a7();
        check_a8();
    }
    if (!skip_slow) check_a9();
    if (!only_slow) {
        check_a10();
        check_a11();
        check_a12();
        check_a13();
    }

    if (g_failures > 0) {
        std::printf("%d check(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all checks passed\n");
    return 0;
}

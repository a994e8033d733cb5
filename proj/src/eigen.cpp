#include "jacobi/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jacobi/util.hpp"

namespace jacobi {

namespace {

// Smallest admissible pivot magnitude for the Sturm sweep.  Scaling by the
// largest squared off-diagonal keeps the e^2/q division finite.
double pivot_floor(const Window& w) {
    double emax2 = 1.0;
    for (double a : w.offdiag) emax2 = std::max(emax2, a * a);
    return emax2 * 1e-290;
}

std::int64_t sturm_count_raw(const std::vector<double>& diag,
                             const std::vector<double>& offdiag, double e,
                             double pivmin) {
    std::int64_t count = 0;
    double q = diag[0] - e;
    if (std::fabs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < diag.size(); ++i) {
        q = (diag[i] - e) - offdiag[i - 1] * offdiag[i - 1] / q;
        if (std::fabs(q) < pivmin) q = -pivmin;
        if (q < 0.0) ++count;
    }
    return count;
}

// Certain enclosure of the spectrum (Gershgorin discs, slightly padded).
void gershgorin(const Window& w, double& lo, double& hi) {
    const std::size_t n = w.diag.size();
    lo = w.diag[0];
    hi = w.diag[0];
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::fabs(w.offdiag[i - 1]);
        if (i + 1 < n) r += std::fabs(w.offdiag[i]);
        lo = std::min(lo, w.diag[i] - r);
        hi = std::max(hi, w.diag[i] + r);
    }
    const double pad = 1e-8 * (1.0 + std::max(std::fabs(lo), std::fabs(hi)));
    lo -= pad;
    hi += pad;
}

struct BisectCtx {
    const std::vector<double>* diag;
    const std::vector<double>* offdiag;
    double pivmin;
    double tol;
};

// Emit, in ascending order, the eigenvalues inside (lo, hi] given the
// counts below lo and hi.
void subdivide(const BisectCtx& ctx, double lo, std::int64_t clo, double hi,
               std::int64_t chi, std::vector<double>& out) {
    if (chi == clo) return;
    if (hi - lo <= ctx.tol) {
        const double mid = 0.5 * (lo + hi);
        for (std::int64_t k = clo; k < chi; ++k) out.push_back(mid);
        return;
    }
    const double mid = 0.5 * (lo + hi);
    const std::int64_t cmid =
        sturm_count_raw(*ctx.diag, *ctx.offdiag, mid, ctx.pivmin);
    subdivide(ctx, lo, clo, mid, cmid, out);
    subdivide(ctx, mid, cmid, hi, chi, out);
}

}  // namespace

std::int64_t sturm_count(const Window& w, double e) {
    return sturm_count_raw(w.diag, w.offdiag, e, pivot_floor(w));
}

std::vector<double> eigenvalues_bisect(const Window& w, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("eigenvalues_bisect: tol must be > 0");
    const std::int64_t n = static_cast<std::int64_t>(w.diag.size());
    double lo, hi;
    gershgorin(w, lo, hi);

    BisectCtx ctx{&w.diag, &w.offdiag, pivot_floor(w), tol};

    // Partition the enclosure into strips so the subdivision trees run in
    // parallel; boundary counts make the strips independent.
    const std::int64_t nstrips = std::min<std::int64_t>(64, std::max<std::int64_t>(1, n / 8));
    std::vector<double> bounds(static_cast<std::size_t>(nstrips) + 1);
    std::vector<std::int64_t> counts(static_cast<std::size_t>(nstrips) + 1);
    for (std::int64_t s = 0; s <= nstrips; ++s) {
        bounds[static_cast<std::size_t>(s)] =
            lo + (hi - lo) * static_cast<double>(s) / static_cast<double>(nstrips);
    }
    counts.front() = 0;   // below the enclosure
    counts.back() = n;    // above the enclosure
    for (std::int64_t s = 1; s < nstrips; ++s) {
        counts[static_cast<std::size_t>(s)] =
            sturm_count_raw(w.diag, w.offdiag, bounds[static_cast<std::size_t>(s)], ctx.pivmin);
    }

    std::vector<std::vector<double>> slots(static_cast<std::size_t>(nstrips));
    parallel_for(static_cast<std::size_t>(nstrips), [&](std::size_t s) {
        subdivide(ctx, bounds[s], counts[s], bounds[s + 1], counts[s + 1], slots[s]);
    });

    std::vector<double> eigs;
    eigs.reserve(static_cast<std::size_t>(n));
    for (auto& slot : slots) eigs.insert(eigs.end(), slot.begin(), slot.end());
    return eigs;
}

DOSMeasure dos_measure(const Coefficients& j, std::int64_t n, double tol) {
    if (n < 1) throw std::invalid_argument("dos_measure: box size must be >= 1");
    if (tol <= 0.0) tol = 1e-10 * j.c0();
    return DOSMeasure{eigenvalues_bisect(extract_window(j, 0, n), tol)};
}

double ids_estimate(const Coefficients& j, double e, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("ids_estimate: box size must be >= 1");
    return ids_estimate(extract_window(j, 0, n), e);
}

double ids_estimate(const Window& w, double e) {
    return static_cast<double>(sturm_count(w, e)) /
           static_cast<double>(w.diag.size());
}

double log_potential(const DOSMeasure& nu, ComplexEnergy z) {
    if (nu.eigenvalues.empty()) throw std::invalid_argument("log_potential: empty measure");
    const double e = z.re, eta = z.im;
    std::vector<double> terms(nu.eigenvalues.size());
    for (std::size_t i = 0; i < nu.eigenvalues.size(); ++i) {
        const double d = nu.eigenvalues[i] - e;
        if (eta == 0.0 && std::fabs(d) < 1e-14) {
            throw std::domain_error(
                "log_potential: energy collides with a spectrum atom; perturb the energy");
        }
        terms[i] = 0.5 * std::log(d * d + eta * eta);
    }
    return pairwise_sum(terms) * nu.weight();
}

double mean_log_a(const Coefficients& j, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("mean_log_a: box size must be >= 1");
    std::vector<double> terms(static_cast<std::size_t>(n));
    for (std::int64_t k = 0; k < n; ++k) {
        terms[static_cast<std::size_t>(k)] = std::log(j.at(k).a);
    }
    return pairwise_sum(terms) / static_cast<double>(n);
}

double thouless_rhs(const Coefficients& j, ComplexEnergy z, std::int64_t n) {
    return thouless_rhs(dos_measure(j, n), mean_log_a(j, n), z);
}

double thouless_rhs(const DOSMeasure& nu, double mean_log_a, ComplexEnergy z) {
    return log_potential(nu, z) - mean_log_a;
}

}  // namespace jacobi

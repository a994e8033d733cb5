#include "jacobi/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jacobi/models.hpp"
#include "jacobi/util.hpp"

namespace jacobi {

EmpiricalMeasure empirical_measure(const Coefficients& j, std::int64_t n,
                                   std::int64_t k) {
    if (n < 1) throw std::invalid_argument("empirical_measure: need n >= 1");
    if (k < 0) throw std::invalid_argument("empirical_measure: need k >= 0");
    const std::int64_t len = 2 * k + 1;
    if (n * (2 * len) > 400000000) {
        throw std::invalid_argument("empirical_measure: window storage too large; reduce n or k");
    }
    EmpiricalMeasure m;
    m.k = k;
    m.c0 = j.c0();
    m.windows.resize(static_cast<std::size_t>(n));
    parallel_for(n, [&](std::int64_t i) {
        m.windows[static_cast<std::size_t>(i)] = extract_window(j, i - k, len);
    });
    return m;
}

namespace {

// Normalized entries of one window, in a fixed order: b(-k..k)/cnorm then
// a(-k..k-1)/cnorm.
void window_entries(const Window& w, double cnorm, std::vector<double>& u) {
    u.clear();
    for (double b : w.diag) u.push_back(b / cnorm);
    for (double a : w.offdiag) u.push_back(a / cnorm);
}

}  // namespace

MomentVector moment_vector(const EmpiricalMeasure& m, int degree, double cnorm) {
    if (degree != 1 && degree != 2) {
        throw std::invalid_argument("moment_vector: degree must be 1 or 2");
    }
    if (!(cnorm >= m.c0)) {
        throw std::invalid_argument("moment_vector: cnorm must dominate the operator bound");
    }
    const std::size_t t = static_cast<std::size_t>(4 * m.k + 1);
    std::size_t count = t;
    if (degree == 2) count += t * (t + 1) / 2;

    // Kahan accumulation per moment: the error stays O(eps) after the final
    // 1/N, which the periodic-exactness checks rely on.
    std::vector<double> sum(count, 0.0), comp(count, 0.0);
    std::vector<double> u;
    u.reserve(t);
    for (const Window& w : m.windows) {
        window_entries(w, cnorm, u);
        std::size_t idx = 0;
        const auto add = [&](double x) {
            const double y = x - comp[idx];
            const double s = sum[idx] + y;
            comp[idx] = (s - sum[idx]) - y;
            sum[idx] = s;
            ++idx;
        };
        for (std::size_t i = 0; i < t; ++i) add(u[i]);
        if (degree == 2) {
            for (std::size_t i = 0; i < t; ++i) {
                for (std::size_t jj = i; jj < t; ++jj) add(u[i] * u[jj]);
            }
        }
    }
    MomentVector out;
    out.k = m.k;
    out.degree = degree;
    out.cnorm = cnorm;
    out.values.resize(count);
    const double w = m.weight();
    for (std::size_t i = 0; i < count; ++i) out.values[i] = sum[i] * w;
    return out;
}

double cylinder_distance(const EmpiricalMeasure& m1, const EmpiricalMeasure& m2,
                         int degree) {
    if (m1.k != m2.k) {
        throw std::invalid_argument("cylinder_distance: window radii differ");
    }
    const double cnorm = std::max(m1.c0, m2.c0);
    const MomentVector v1 = moment_vector(m1, degree, cnorm);
    const MomentVector v2 = moment_vector(m2, degree, cnorm);
    double d = 0.0;
    for (std::size_t i = 0; i < v1.values.size(); ++i) {
        d = std::max(d, std::fabs(v1.values[i] - v2.values[i]));
    }
    return d;
}

double convergence_in_probability(const Coefficients& j, const Target& target,
                                  std::int64_t n, double eps, std::int64_t k) {
    if (n < 1) throw std::invalid_argument("convergence_in_probability: need n >= 1");
    if (!(eps > 0.0)) throw std::invalid_argument("convergence_in_probability: need eps > 0");
    const Coefficients ref = target.is_free_torus() ? gen_free() : target.op();
    std::vector<std::uint8_t> far(static_cast<std::size_t>(n), 0);
    parallel_for(n, [&](std::int64_t i) {
        const double d = metric_d(shift(j, i + 1), ref, k);
        far[static_cast<std::size_t>(i)] = d >= eps ? 1 : 0;
    });
    std::int64_t count = 0;
    for (std::uint8_t f : far) count += f;
    return static_cast<double>(count) / static_cast<double>(n);
}

double drr_statistic(const Coefficients& j, std::int64_t n, double eps) {
    if (n < 1) throw std::invalid_argument("drr_statistic: need n >= 1");
    if (!(eps > 0.0)) throw std::invalid_argument("drr_statistic: need eps > 0");
    std::vector<std::uint8_t> dev(static_cast<std::size_t>(n), 0);
    parallel_for(n, [&](std::int64_t i) {
        const CoeffPair cp = j.at(i + 1);
        dev[static_cast<std::size_t>(i)] =
            (std::fabs(cp.a - 1.0) > eps || std::fabs(cp.b) > eps) ? 1 : 0;
    });
    std::int64_t count = 0;
    for (std::uint8_t f : dev) count += f;
    return static_cast<double>(count) / static_cast<double>(n);
}

}  // namespace jacobi

#include "jacobi/averaging.hpp"

#include <algorithm>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "jacobi/transfer.hpp"
#include "jacobi/util.hpp"

namespace jacobi {

double gamma_const(double c, ComplexEnergy z) {
    if (z.is_real()) {
        const double w = 0.5 * (z.re - c);
        if (std::fabs(w) <= 1.0) return 0.0;  // inside the band, exactly
        return std::acosh(std::fabs(w));
    }
    const cplx w = 0.5 * (z.cplx() - c);
    const cplx s = std::sqrt(w * w - 1.0);
    // The two candidates w +- s are reciprocal; the exponent is the log of
    // the one outside the unit circle.
    return std::log(std::max(std::abs(w + s), std::abs(w - s)));
}

double k_const(double c, double e) {
    const double w = std::clamp(-(e - c) / 2.0, -1.0, 1.0);
    return std::acos(w) / std::numbers::pi;
}

Interval simonzhu_interval(const ProfileFunction& f) {
    Interval iv;
    iv.lo = -2.0 + f.fmax();
    iv.hi = 2.0 + f.fmin();
    iv.empty = iv.lo > iv.hi;
    return iv;
}

QuadResult average_r0(const ProfileFunction& f, double e, AvgQuantity q,
                      std::int64_t nodes) {
    if (nodes < 2) throw std::invalid_argument("average_r0: need nodes >= 2");
    const auto integral = [&](std::int64_t m) {
        std::vector<double> terms(static_cast<std::size_t>(m));
        parallel_for(m, [&](std::int64_t i) {
            const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(m);
            const double c = f(x);
            terms[static_cast<std::size_t>(i)] =
                q == AvgQuantity::lyapunov ? gamma_const(c, ComplexEnergy{e})
                                           : k_const(c, e);
        });
        return pairwise_sum(terms) / static_cast<double>(m);
    };
    const double coarse = integral(nodes);
    const double fine = integral(2 * nodes);
    return {fine, std::fabs(fine - coarse), 2 * nodes};
}

MCResult average_skew_mc(const ProfileFunction& f, double e, int r,
                         std::int64_t n_alpha, std::int64_t n_omega,
                         std::int64_t n_inner, std::uint64_t seed) {
    if (r < 1) throw std::invalid_argument("average_skew_mc: requires r >= 1");
    if (n_alpha < 1 || n_omega < 1 || n_inner < 1) {
        throw std::invalid_argument("average_skew_mc: sample counts must be >= 1");
    }
    const std::int64_t m = n_alpha * n_omega;
    std::vector<double> vals(static_cast<std::size_t>(m));
    parallel_for(m, [&](std::int64_t s) {
        const std::int64_t ia = s / n_omega;
        SkewShiftState st;
        st.r = r;
        st.alpha = u01_stream(seed, 0, static_cast<std::uint64_t>(ia));
        st.omega.resize(static_cast<std::size_t>(r));
        for (int t = 0; t < r; ++t) {
            st.omega[static_cast<std::size_t>(t)] = u01_stream(
                seed, 1, static_cast<std::uint64_t>(s) * static_cast<std::uint64_t>(r) +
                             static_cast<std::uint64_t>(t));
        }
        vals[static_cast<std::size_t>(s)] =
            lyapunov_finite(gen_skewshift(f, st), ComplexEnergy{e}, 0, n_inner);
    });

    const double mean = pairwise_sum(vals) / static_cast<double>(m);
    double se = 0.0;
    if (m > 1) {
        std::vector<double> dev2(static_cast<std::size_t>(m));
        for (std::size_t i = 0; i < dev2.size(); ++i) {
            const double d = vals[i] - mean;
            dev2[i] = d * d;
        }
        se = std::sqrt(pairwise_sum(dev2) /
                       (static_cast<double>(m) * static_cast<double>(m - 1)));
    }
    return {mean, se, m};
}

}  // namespace jacobi

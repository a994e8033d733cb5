#include "doctest.h"

#include <atomic>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "jacobi/util.hpp"

using namespace jacobi;

TEST_CASE("u01_keyed is deterministic and lands in [0,1)") {
    for (std::uint64_t n = 0; n < 1000; ++n) {
        const double x = u01_keyed(42, n);
        CHECK(x == u01_keyed(42, n));
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
    // Different seeds decorrelate the same index.
    CHECK(u01_keyed(1, 7) != u01_keyed(2, 7));
}

TEST_CASE("u01_stream substreams differ from each other") {
    int collisions = 0;
    for (std::uint64_t i = 0; i < 200; ++i) {
        if (u01_stream(9, 0, i) == u01_stream(9, 1, i)) ++collisions;
    }
    CHECK(collisions == 0);
}

TEST_CASE("pairwise_sum matches sequential sums and is order-fixed") {
    std::vector<double> xs(1001);
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = std::sin(0.1 * double(i));
    const double ref = std::accumulate(xs.begin(), xs.end(), 0.0);
    const double got = pairwise_sum(xs);
    CHECK(got == doctest::Approx(ref).epsilon(1e-12));
    CHECK(got == pairwise_sum(xs.data(), xs.size()));
    CHECK(pairwise_sum(xs.data(), 0) == 0.0);
}

TEST_CASE("parallel_for touches every index exactly once") {
    const std::int64_t n = 10000;
    std::vector<std::atomic<int>> hits(n);
    parallel_for(n, [&](std::int64_t i) { hits[std::size_t(i)]++; });
    for (const auto& h : hits) CHECK(h.load() == 1);
}

TEST_CASE("parallel_for rethrows worker exceptions") {
    CHECK_THROWS_AS(parallel_for(100,
                                 [&](std::int64_t i) {
                                     if (i == 57) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
}

TEST_CASE("frac_int_times agrees with direct computation on exact cases") {
    CHECK(frac_int_times(1, 0.25) == 0.25);
    CHECK(frac_int_times(3, 0.5) == 0.5);
    CHECK(frac_int_times(4, 0.25) == 0.0);
    // negative multiples fold to 1 - frac
    CHECK(frac_int_times(-1, 0.25) == 0.75);
    // large k: frac(k x) for x a dyadic rational is periodic with period 2^d
    const double x = 3.0 / 16.0;
    const __int128 big = (__int128(1) << 100) + 5;
    CHECK(frac_int_times(big, x) == frac_int_times(5, x));
}

TEST_CASE("frac_pow_mod1 reproduces high-precision reference values") {
    // frac(n^1.5) for n = 100000..100010, reference values computed offline
    // with 113+ bit arithmetic.
    const double expect[] = {
        0.6016837933199889354443, 0.9445186707230357514738,
        0.2897252445127713874949, 0.6373035028309214294951,
        0.9872534338193893326869, 0.3395750256202564170609,
        0.6942682663757818629396, 0.05133314422840270653103,
        0.4107696473207338354828, 0.7725777637955679844361,
        0.1367574817958757305797};
    for (int i = 0; i <= 10; ++i) {
        CHECK(std::fabs(frac_pow_mod1(100000 + i, 1.5) - expect[i]) < 1e-10);
    }
    CHECK(std::fabs(frac_pow_mod1(9999991, 2.7) - 0.9811304957762032709537) < 1e-10);
    CHECK(std::fabs(frac_pow_mod1(9999991, 1.3) - 0.8516351596805051915543) < 1e-10);
    CHECK(std::fabs(frac_pow_mod1(9999991, 1.7) - 0.4646318732897807107088) < 1e-10);
    CHECK(std::fabs(frac_pow_mod1(123456, 2.5) - 0.4281243992615123257689) < 1e-10);
    CHECK(std::fabs(frac_pow_mod1(7, 0.5) - 0.6457513110645905905016) < 1e-12);
}

TEST_CASE("frac_pow_mod1 is exactly zero on integer powers") {
    CHECK(frac_pow_mod1(4, 0.5) == 0.0);     // sqrt(4) = 2
    CHECK(frac_pow_mod1(9, 0.5) == 0.0);     // sqrt(9) = 3
    CHECK(frac_pow_mod1(123, 2.0) == 0.0);   // integer exponent
    CHECK(frac_pow_mod1(123, 3.0) == 0.0);
    CHECK(frac_pow_mod1(0, 0.7) == 0.0);
    CHECK(frac_pow_mod1(1, 0.7) == 0.0);     // 1^rho = 1
    CHECK(frac_pow_mod1(-4, 0.5) == 0.0);    // |n| is used
}

TEST_CASE("set_max_threads round-trips") {
    const int before = max_threads();
    set_max_threads(3);
    CHECK(max_threads() == 3);
    set_max_threads(before);
}

#include "jacobi/util.hpp"

#include <quadmath.h>

#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace jacobi {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

double u01_keyed(std::uint64_t seed, std::uint64_t n) {
    std::uint64_t h = splitmix64(splitmix64(seed) + n * 0x9e3779b97f4a7c15ull);
    return (h >> 11) * 0x1.0p-53;
}

double u01_stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t idx) {
    return u01_keyed(splitmix64(seed ^ splitmix64(stream)), idx);
}

static double pairwise_rec(const double* xs, std::size_t n) {
    if (n <= 32) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += xs[i];
        return s;
    }
    std::size_t h = n / 2;
    return pairwise_rec(xs, h) + pairwise_rec(xs + h, n - h);
}

double pairwise_sum(const double* xs, std::size_t n) { return pairwise_rec(xs, n); }
double pairwise_sum(const std::vector<double>& xs) { return pairwise_rec(xs.data(), xs.size()); }

static std::atomic<int> g_max_threads{0};

void set_max_threads(int n) { g_max_threads.store(n < 0 ? 0 : n); }

int max_threads() {
    int t = g_max_threads.load();
    if (t == 0) {
        unsigned hc = std::thread::hardware_concurrency();
        t = hc == 0 ? 1 : static_cast<int>(hc);
    }
    return t;
}

void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn) {
    if (n <= 0) return;
    int workers = max_threads();
    if (workers > n) workers = static_cast<int>(n);
    if (workers <= 1) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr err;
    std::mutex err_mu;
    auto body = [&]() {
        for (;;) {
            std::int64_t i = next.fetch_add(1);
            if (i >= n || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

// frac(k*x): write x = m / 2^d exactly (m odd, d minimal), then
// k*x mod 1 = (k*m mod 2^d) / 2^d, an integer computation that fits in
// 128-bit words for every d <= 126, i.e. for every x >= 2^-73.
double frac_int_times(__int128 k, double x) {
    if (x == 0.0 || k == 0) return 0.0;
    if (k < 0) {
        double f = frac_int_times(-k, x);
        return f == 0.0 ? 0.0 : 1.0 - f;
    }
    int e;
    double mant = std::frexp(x, &e);                               // x = mant * 2^e
    std::uint64_t m = static_cast<std::uint64_t>(std::ldexp(mant, 53));
    int d = 53 - e;                                                // x = m / 2^d
    int tz = std::countr_zero(m);
    m >>= tz;
    d -= tz;
    if (d <= 0) return 0.0;                                        // x is an integer
    unsigned __int128 kq = static_cast<unsigned __int128>(k);
    if (d <= 126) {
        unsigned __int128 mask = ((static_cast<unsigned __int128>(1) << d) - 1);
        unsigned __int128 kr = kq & mask;
        unsigned __int128 r;
        if (d <= 64) {
            r = (kr * m) & mask;
        } else {
            unsigned __int128 hi = kr >> 64;
            std::uint64_t lo = static_cast<std::uint64_t>(kr);
            unsigned __int128 himask = ((static_cast<unsigned __int128>(1) << (d - 64)) - 1);
            r = (((hi * m) & himask) << 64) + static_cast<unsigned __int128>(lo) * m;
            r &= mask;
        }
        return std::ldexp(static_cast<double>(r), -d);
    }
    // x < 2^-73: k*x < 2^53, so a long-double product is accurate enough.
    long double p = static_cast<long double>(kq) * static_cast<long double>(x);
    long double f = p - std::floor(static_cast<double>(p));
    f -= std::floor((double)f);
    double out = static_cast<double>(f);
    if (out >= 1.0) out = 0.0;
    if (out < 0.0) out = 0.0;
    return out;
}

double frac_pow_mod1(std::int64_t n, double rho) {
    if (!(rho > 0.0) || !std::isfinite(rho))
        throw std::invalid_argument("frac_pow_mod1: rho must be positive and finite");
    if (n < 0) n = -n;
    if (n <= 1) return 0.0;
    if (rho == std::floor(rho)) return 0.0;                        // integer power of an integer
    __float128 y = powq(static_cast<__float128>(n), static_cast<__float128>(rho));
    __float128 r = nearbyintq(y);
    // Snap computed values that sit within quad roundoff of an integer
    // (e.g. 9^1.5 = 27); genuine fractional parts of equidistributing
    // sequences never come this close.
    __float128 snap = 1e-25Q + y * 1e-30Q;
    if (fabsq(y - r) < snap) return 0.0;
    double f = static_cast<double>(y - floorq(y));
    if (f < 0.0) f = 0.0;
    if (f >= 1.0) f = 0.0;
    return f;
}

} // namespace jacobi

#pragma once
// Shared numeric helpers: a keyed counter RNG, deterministic pairwise
// summation, a small parallel-for, and exact mod-1 arithmetic used by the
// deterministic potential generators.

#include <cstdint>
#include <functional>
#include <vector>

namespace jacobi {

// SplitMix64 finalizer; good 64-bit avalanche, pure function.
std::uint64_t splitmix64(std::uint64_t x);

// Uniform [0,1) keyed by (seed, n).  Counter-based: evaluation order does not
// matter and b(n) can be recomputed at any index in O(1).
double u01_keyed(std::uint64_t seed, std::uint64_t n);

// Independent substreams of the same seed, e.g. one per Monte Carlo axis.
double u01_stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t idx);

// Fixed binary-tree summation: byte-reproducible and O(log n) rounding error.
double pairwise_sum(const double* xs, std::size_t n);
double pairwise_sum(const std::vector<double>& xs);

// Worker-count knob used by all internally parallel routines.
// 0 (the default) means std::thread::hardware_concurrency().
void set_max_threads(int n);
int max_threads();

// Runs fn(i) for i in [0, n) across worker threads.  fn must only write to
// per-index slots; the first exception thrown is rethrown on the caller.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn);

// frac(k * x) for a 128-bit integer k, computed exactly from the binary
// representation of x whenever x >= 2^-73 (always true for the angle and
// frequency parameters this library feeds it).
double frac_int_times(__int128 k, double x);

// frac(|n|^rho), absolute error <= 1e-10 for |n| <= 1e7 and rho <= 3.
// Evaluated in 113-bit arithmetic; powers that are exactly integers
// (integer rho, or half-integer rho at perfect squares) return exactly 0.
double frac_pow_mod1(std::int64_t n, double rho);

} // namespace jacobi

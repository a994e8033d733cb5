#include "jacobi/lattice.hpp"

#include <cmath>
#include <memory>
#include <vector>

namespace jacobi {

std::string Coefficients::descriptor() const {
    if (offset_ == 0) return base_;
    return base_ + (offset_ > 0 ? "@+" : "@") + std::to_string(offset_);
}

Coefficients shift(const Coefficients& j, std::int64_t n) {
    Coefficients out = j;
    out.offset_ += n;
    return out;
}

Coefficients reflect(const Coefficients& j) {
    Coefficients src = j;  // capture by value, offset included
    return Coefficients(
        [src](std::int64_t n) -> CoeffPair {
            return {src.a(-n - 2), src.b(-n - 1)};
        },
        j.c0(), "reflect(" + j.descriptor() + ")");
}

void Window::validate() const {
    if (diag.empty()) throw std::invalid_argument("Window: length must be >= 1");
    if (offdiag.size() + 1 != diag.size())
        throw std::invalid_argument("Window: offdiag must have length-1 entries");
    for (double a : offdiag)
        if (!(a > 0.0)) throw std::invalid_argument("Window: off-diagonal entries must be positive");
}

Window extract_window(const Coefficients& j, std::int64_t n0, std::int64_t len) {
    if (len < 1) throw std::invalid_argument("extract_window: length must be >= 1");
    Window w;
    w.offset = n0;
    w.diag.resize(static_cast<std::size_t>(len));
    w.offdiag.resize(static_cast<std::size_t>(len - 1));
    for (std::int64_t k = 0; k < len; ++k) {
        CoeffPair p = j.at(n0 + k);
        w.diag[static_cast<std::size_t>(k)] = p.b;
        if (k < len - 1) w.offdiag[static_cast<std::size_t>(k)] = p.a;
    }
    w.validate();
    return w;
}

Coefficients materialize(const Coefficients& j, std::int64_t n0, std::int64_t len) {
    if (len < 1) throw std::invalid_argument("materialize: length must be >= 1");
    auto cache = std::make_shared<std::vector<CoeffPair>>();
    cache->reserve(static_cast<std::size_t>(len));
    for (std::int64_t k = 0; k < len; ++k) cache->push_back(j.at(n0 + k));
    Coefficients src = j;
    return Coefficients(
        [cache, src, n0, len](std::int64_t n) -> CoeffPair {
            if (n >= n0 && n < n0 + len) return (*cache)[static_cast<std::size_t>(n - n0)];
            return src.at(n);
        },
        j.c0(), j.descriptor());
}

double metric_d(const Coefficients& j1, const Coefficients& j2, std::int64_t k) {
    if (k < 0) throw std::invalid_argument("metric_d: truncation radius must be >= 0");
    double sum = 0.0;
    for (std::int64_t n = -k; n <= k; ++n) {
        CoeffPair p = j1.at(n), q = j2.at(n);
        sum += std::ldexp(std::fabs(p.b - q.b) + std::fabs(p.a - q.a), -static_cast<int>(std::llabs(n)));
    }
    return sum;
}

} // namespace jacobi

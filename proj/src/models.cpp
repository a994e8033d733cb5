#include "jacobi/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "jacobi/util.hpp"

namespace jacobi {

namespace {

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Comma-separated doubles; every token must parse completely.
std::vector<double> parse_num_list(const std::string& s, const char* what) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = s.find(',', pos);
        const std::string tok =
            s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string(what) + ": bad number '" + tok + "'");
        }
        if (used != tok.size()) {
            throw std::invalid_argument(std::string(what) + ": bad number '" + tok + "'");
        }
        out.push_back(v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

// Splits "head:rest" at the first colon; rest may itself contain colons.
std::pair<std::string, std::string> split_head(const std::string& s) {
    const std::size_t colon = s.find(':');
    if (colon == std::string::npos) return {s, std::string()};
    return {s.substr(0, colon), s.substr(colon + 1)};
}

std::int64_t floor_mod(std::int64_t n, std::int64_t p) {
    std::int64_t r = n % p;
    return r < 0 ? r + p : r;
}

}  // namespace

// ---------------------------------------------------------------------------
// ProfileFunction

ProfileFunction ProfileFunction::trig(std::vector<double> cos_coeffs,
                                      std::vector<double> sin_coeffs) {
    if (cos_coeffs.empty()) {
        throw std::invalid_argument("ProfileFunction::trig: need at least a0");
    }
    if (sin_coeffs.size() + 1 != cos_coeffs.size()) {
        throw std::invalid_argument(
            "ProfileFunction::trig: need one sin coefficient per harmonic");
    }
    ProfileFunction f;
    f.is_trig_ = true;
    f.cos_ = std::move(cos_coeffs);
    f.sin_ = std::move(sin_coeffs);
    std::string d = "trig:" + fmt_num(f.cos_[0]);
    for (std::size_t k = 1; k < f.cos_.size(); ++k) {
        d += "," + fmt_num(f.cos_[k]) + "," + fmt_num(f.sin_[k - 1]);
    }
    f.desc_ = std::move(d);
    f.find_extrema();
    return f;
}

ProfileFunction ProfileFunction::table(std::vector<double> xs,
                                       std::vector<double> vals) {
    if (xs.size() < 2 || xs.size() != vals.size()) {
        throw std::invalid_argument("ProfileFunction::table: need matching x/value lists, >= 2 points");
    }
    if (xs.front() != 0.0 || xs.back() != 1.0) {
        throw std::invalid_argument("ProfileFunction::table: breakpoints must run from 0 to 1");
    }
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!(xs[i] > xs[i - 1])) {
            throw std::invalid_argument("ProfileFunction::table: breakpoints must increase");
        }
    }
    ProfileFunction f;
    f.is_trig_ = false;
    f.xs_ = std::move(xs);
    f.vals_ = std::move(vals);
    std::string d = "linear:";
    for (std::size_t i = 0; i < f.xs_.size(); ++i) {
        if (i) d += ",";
        d += fmt_num(f.xs_[i]) + "," + fmt_num(f.vals_[i]);
    }
    f.desc_ = std::move(d);
    f.find_extrema();
    return f;
}

ProfileFunction ProfileFunction::identity() { return table({0.0, 1.0}, {0.0, 1.0}); }

ProfileFunction ProfileFunction::parse(const std::string& descriptor) {
    const auto [head, rest] = split_head(descriptor);
    if (head == "identity") {
        if (!rest.empty()) throw std::invalid_argument("profile identity takes no parameters");
        return identity();
    }
    if (head == "trig") {
        // a0, then (a_k, b_k) pairs; a trailing unpaired a_k means b_k = 0,
        // so plain cosine profiles read naturally as "trig:0,1".
        const std::vector<double> nums = parse_num_list(rest, "profile trig");
        std::vector<double> cs{nums[0]}, ss;
        for (std::size_t i = 1; i < nums.size(); i += 2) {
            cs.push_back(nums[i]);
            ss.push_back(i + 1 < nums.size() ? nums[i + 1] : 0.0);
        }
        return trig(std::move(cs), std::move(ss));
    }
    if (head == "linear") {
        const std::vector<double> nums = parse_num_list(rest, "profile linear");
        if (nums.size() < 4 || nums.size() % 2 != 0) {
            throw std::invalid_argument("profile linear: expected x0,v0,x1,v1,...");
        }
        std::vector<double> xs, vals;
        for (std::size_t i = 0; i < nums.size(); i += 2) {
            xs.push_back(nums[i]);
            vals.push_back(nums[i + 1]);
        }
        return table(std::move(xs), std::move(vals));
    }
    if (head == "table") {
        std::ifstream in(rest);
        if (!in) throw std::invalid_argument("profile table: cannot open '" + rest + "'");
        std::vector<double> xs, vals;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::istringstream row(line);
            double x, v;
            if (!(row >> x >> v)) {
                throw std::invalid_argument("profile table: bad line '" + line + "'");
            }
            xs.push_back(x);
            vals.push_back(v);
        }
        return table(std::move(xs), std::move(vals));
    }
    throw std::invalid_argument("unknown profile kind '" + head + "'");
}

double ProfileFunction::operator()(double x) const {
    double y = x - std::floor(x);
    if (y >= 1.0) y = 0.0;  // guards the floor(1-ulp) edge
    if (is_trig_) {
        double acc = cos_[0];
        for (std::size_t k = 1; k < cos_.size(); ++k) {
            const double ang = 2.0 * std::numbers::pi * static_cast<double>(k) * y;
            acc += cos_[k] * std::cos(ang) + sin_[k - 1] * std::sin(ang);
        }
        return acc;
    }
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), y);
    const std::size_t hi = std::min<std::size_t>(
        static_cast<std::size_t>(it - xs_.begin()), xs_.size() - 1);
    const std::size_t lo = hi - 1;
    const double t = (y - xs_[lo]) / (xs_[hi] - xs_[lo]);
    return vals_[lo] + t * (vals_[hi] - vals_[lo]);
}

void ProfileFunction::find_extrema() {
    if (!is_trig_) {
        fmax_ = *std::max_element(vals_.begin(), vals_.end());
        fmin_ = *std::min_element(vals_.begin(), vals_.end());
        return;
    }
    const int grid = 1 << 16;
    double xmax = 0.0, xmin = 0.0;
    double vmax = -std::numeric_limits<double>::infinity();
    double vmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= grid; ++i) {
        const double x = static_cast<double>(i) / grid;
        const double v = (*this)(x);
        if (v > vmax) vmax = v, xmax = x;
        if (v < vmin) vmin = v, xmin = x;
    }
    // Ternary refinement inside the winning cell's neighborhood.
    const auto refine = [this, grid](double xc, double sign) {
        double lo = xc - 1.0 / grid, hi = xc + 1.0 / grid;
        for (int it = 0; it < 120; ++it) {
            const double m1 = lo + (hi - lo) / 3.0;
            const double m2 = hi - (hi - lo) / 3.0;
            if (sign * (*this)(m1) < sign * (*this)(m2)) {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        return (*this)(0.5 * (lo + hi));
    };
    fmax_ = std::max(vmax, refine(xmax, +1.0));
    fmin_ = std::min(vmin, refine(xmin, -1.0));
}

// ---------------------------------------------------------------------------
// Skew shift

void SkewShiftState::validate() const {
    if (r < 0) throw std::invalid_argument("skew shift: r must be >= 0");
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("skew shift: alpha must lie in [0,1)");
    }
    if (omega.size() != static_cast<std::size_t>(r)) {
        throw std::invalid_argument("skew shift: omega must have r coordinates");
    }
    for (double w : omega) {
        if (!(w >= 0.0 && w < 1.0)) {
            throw std::invalid_argument("skew shift: omega coordinates must lie in [0,1)");
        }
    }
}

__int128 binomial128(std::int64_t n, int j) {
    if (j < 0) throw std::invalid_argument("binomial128: lower index must be >= 0");
    // C(n,i) = C(n,i-1) * (n-i+1) / i keeps every intermediate integral.
    __int128 c = 1;
    for (int i = 1; i <= j; ++i) {
        const __int128 factor = static_cast<__int128>(n) - (i - 1);
        __int128 prod;
        if (__builtin_mul_overflow(c, factor, &prod)) {
            throw std::overflow_error("binomial128: orbit index too large for exact arithmetic");
        }
        c = prod / i;
    }
    return c;
}

double skew_coordinate(const SkewShiftState& st, std::int64_t n) {
    if (st.r < 1) throw std::invalid_argument("skew_coordinate: requires r >= 1");
    const int k = st.r - 1;
    double acc = 0.0;
    for (int j = 0; j <= k; ++j) {
        acc += frac_int_times(binomial128(n, j), st.omega[static_cast<std::size_t>(k - j)]);
        if (acc >= 1.0) acc -= 1.0;
    }
    acc += frac_int_times(binomial128(n, k + 1), st.alpha);
    if (acc >= 1.0) acc -= 1.0;
    return acc;
}

// ---------------------------------------------------------------------------
// Coefficient families

Coefficients gen_free() {
    return Coefficients([](std::int64_t) { return CoeffPair{1.0, 0.0}; }, 1.5, "free");
}

Coefficients gen_constant(double c) {
    return Coefficients([c](std::int64_t) { return CoeffPair{1.0, c}; },
                        std::max(1.5, std::fabs(c)), "constant:" + fmt_num(c));
}

Coefficients gen_periodic(std::vector<double> bs) {
    if (bs.empty()) throw std::invalid_argument("gen_periodic: need at least one value");
    double bound = 0.0;
    std::string d = "periodic:";
    for (std::size_t i = 0; i < bs.size(); ++i) {
        bound = std::max(bound, std::fabs(bs[i]));
        if (i) d += ",";
        d += fmt_num(bs[i]);
    }
    const auto p = static_cast<std::int64_t>(bs.size());
    auto vals = std::make_shared<std::vector<double>>(std::move(bs));
    return Coefficients(
        [vals, p](std::int64_t n) {
            return CoeffPair{1.0, (*vals)[static_cast<std::size_t>(floor_mod(n, p))]};
        },
        std::max(1.5, bound), std::move(d));
}

Coefficients gen_anderson(std::uint64_t seed, double coupling) {
    if (!(coupling >= 0.0)) throw std::invalid_argument("gen_anderson: coupling must be >= 0");
    return Coefficients(
        [seed, coupling](std::int64_t n) {
            const double u = u01_keyed(seed, static_cast<std::uint64_t>(n));
            return CoeffPair{1.0, coupling * (2.0 * u - 1.0)};
        },
        std::max(1.5, coupling),
        "anderson:" + std::to_string(seed) + "," + fmt_num(coupling));
}

Coefficients gen_sparse_squares(double height) {
    return Coefficients(
        [height](std::int64_t n) {
            if (n < 0) return CoeffPair{1.0, 0.0};
            const auto root = static_cast<std::int64_t>(
                std::llround(std::sqrt(static_cast<double>(n))));
            const bool square = root * root == n ||
                                (root + 1) * (root + 1) == n ||
                                (root > 0 && (root - 1) * (root - 1) == n);
            return CoeffPair{1.0, square ? height : 0.0};
        },
        std::max(1.5, std::fabs(height)), "sparse:" + fmt_num(height));
}

Coefficients gen_decaying(double c, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("gen_decaying: exponent must be > 0");
    return Coefficients(
        [c, p](std::int64_t n) {
            const double base = 1.0 + std::fabs(static_cast<double>(n));
            return CoeffPair{1.0, c / std::pow(base, p)};
        },
        std::max(1.5, std::fabs(c)), "decaying:" + fmt_num(c) + "," + fmt_num(p));
}

Coefficients gen_nrho(const ProfileFunction& f, double rho) {
    if (!(rho > 0.0)) throw std::invalid_argument("gen_nrho: rho must be > 0");
    const double bound = std::max(std::fabs(f.fmax()), std::fabs(f.fmin()));
    return Coefficients(
        [f, rho](std::int64_t n) { return CoeffPair{1.0, f(frac_pow_mod1(n, rho))}; },
        std::max(1.5, bound), "nrho:" + fmt_num(rho) + "/" + f.descriptor());
}

Coefficients gen_skewshift(const ProfileFunction& f, const SkewShiftState& st) {
    st.validate();
    const double bound = std::max(std::fabs(f.fmax()), std::fabs(f.fmin()));
    std::string d = "skew:" + std::to_string(st.r) + "," + fmt_num(st.alpha);
    for (double w : st.omega) d += "," + fmt_num(w);
    d += "/" + f.descriptor();
    if (st.r == 0) {
        const double b = f(st.alpha);
        return Coefficients([b](std::int64_t) { return CoeffPair{1.0, b}; },
                            std::max(1.5, bound), std::move(d));
    }
    return Coefficients(
        [f, st](std::int64_t n) { return CoeffPair{1.0, f(skew_coordinate(st, n))}; },
        std::max(1.5, bound), std::move(d));
}

Coefficients make_model(const std::string& descriptor, const ProfileFunction* f) {
    const auto [head, rest] = split_head(descriptor);
    if (head == "free") {
        if (!rest.empty()) throw std::invalid_argument("model free takes no parameters");
        return gen_free();
    }
    if (head == "constant") {
        const auto nums = parse_num_list(rest, "model constant");
        if (nums.size() != 1) throw std::invalid_argument("model constant: expected constant:c");
        return gen_constant(nums[0]);
    }
    if (head == "periodic") {
        return gen_periodic(parse_num_list(rest, "model periodic"));
    }
    if (head == "anderson") {
        const auto nums = parse_num_list(rest, "model anderson");
        if (nums.size() != 2 || nums[0] < 0 || nums[0] != std::floor(nums[0])) {
            throw std::invalid_argument("model anderson: expected anderson:seed,coupling");
        }
        return gen_anderson(static_cast<std::uint64_t>(nums[0]), nums[1]);
    }
    if (head == "sparse") {
        const auto nums = parse_num_list(rest, "model sparse");
        if (nums.size() != 1) throw std::invalid_argument("model sparse: expected sparse:h");
        return gen_sparse_squares(nums[0]);
    }
    if (head == "decaying") {
        const auto nums = parse_num_list(rest, "model decaying");
        if (nums.size() != 2) throw std::invalid_argument("model decaying: expected decaying:c,p");
        return gen_decaying(nums[0], nums[1]);
    }
    if (head == "nrho") {
        const auto nums = parse_num_list(rest, "model nrho");
        if (nums.size() != 1) throw std::invalid_argument("model nrho: expected nrho:rho");
        if (!f) throw std::invalid_argument("model nrho needs a profile (--profile)");
        return gen_nrho(*f, nums[0]);
    }
    if (head == "skew") {
        const auto nums = parse_num_list(rest, "model skew");
        if (nums.size() < 2 || nums[0] < 0 || nums[0] != std::floor(nums[0])) {
            throw std::invalid_argument("model skew: expected skew:r,alpha[,w0,...]");
        }
        if (!f) throw std::invalid_argument("model skew needs a profile (--profile)");
        SkewShiftState st;
        st.r = static_cast<int>(nums[0]);
        st.alpha = nums[1];
        st.omega.assign(nums.begin() + 2, nums.end());
        if (st.omega.empty() && st.r > 0) st.omega.assign(static_cast<std::size_t>(st.r), 0.0);
        return gen_skewshift(*f, st);
    }
    throw std::invalid_argument("unknown model kind '" + head + "'");
}

// ---------------------------------------------------------------------------
// Equidistribution diagnostics

SequenceSpec SequenceSpec::parse(const std::string& descriptor) {
    const auto [head, rest] = split_head(descriptor);
    SequenceSpec s;
    if (head == "nrho") {
        const auto nums = parse_num_list(rest, "sequence nrho");
        if (nums.size() != 1) throw std::invalid_argument("sequence nrho: expected nrho:rho");
        s.kind = Kind::nrho;
        s.rho = nums[0];
        if (!(s.rho > 0.0)) throw std::invalid_argument("sequence nrho: rho must be > 0");
        return s;
    }
    if (head == "rotation") {
        const auto nums = parse_num_list(rest, "sequence rotation");
        if (nums.size() != 1) throw std::invalid_argument("sequence rotation: expected rotation:alpha");
        s.kind = Kind::rotation;
        s.alpha = nums[0];
        return s;
    }
    if (head == "skew") {
        const auto nums = parse_num_list(rest, "sequence skew");
        if (nums.size() < 2 || nums[0] < 1 || nums[0] != std::floor(nums[0])) {
            throw std::invalid_argument("sequence skew: expected skew:r,alpha[,w0,...]");
        }
        s.kind = Kind::skew_last;
        s.st.r = static_cast<int>(nums[0]);
        s.st.alpha = nums[1];
        s.st.omega.assign(nums.begin() + 2, nums.end());
        if (s.st.omega.empty()) s.st.omega.assign(static_cast<std::size_t>(s.st.r), 0.0);
        s.st.validate();
        return s;
    }
    throw std::invalid_argument("unknown sequence kind '" + head + "'");
}

double SequenceSpec::value(std::int64_t n) const {
    switch (kind) {
        case Kind::nrho:
            return frac_pow_mod1(n, rho);
        case Kind::rotation: {
            const double f = frac_int_times(static_cast<__int128>(n),
                                            alpha - std::floor(alpha));
            return f;
        }
        case Kind::skew_last:
            return skew_coordinate(st, n);
    }
    return 0.0;  // unreachable
}

double star_discrepancy(const SequenceSpec& seq, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("star_discrepancy: need n >= 1");
    std::vector<double> xs(static_cast<std::size_t>(n));
    parallel_for(n, [&](std::int64_t i) {
        xs[static_cast<std::size_t>(i)] = seq.value(i + 1);
    });
    std::sort(xs.begin(), xs.end());
    double d = 0.0;
    const double invn = 1.0 / static_cast<double>(n);
    for (std::int64_t i = 0; i < n; ++i) {
        const double x = xs[static_cast<std::size_t>(i)];
        d = std::max(d, std::max(static_cast<double>(i + 1) * invn - x,
                                 x - static_cast<double>(i) * invn));
    }
    return d;
}

}  // namespace jacobi

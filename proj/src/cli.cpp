#include "jacobi/cli.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <vector>

#include "CLI11.hpp"

#include "jacobi/averaging.hpp"
#include "jacobi/eigen.hpp"
#include "jacobi/lattice.hpp"
#include "jacobi/measures.hpp"
#include "jacobi/models.hpp"
#include "jacobi/transfer.hpp"
#include "jacobi/util.hpp"
#include "jacobi/weyl.hpp"

namespace jacobi {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// RunConfig text form

struct FieldWriter {
    std::ostringstream os;
    void str(const char* k, const std::string& v) { os << k << "=" << v << "\n"; }
    void num(const char* k, double v) { os << k << "=" << fmt17(v) << "\n"; }
    void i64(const char* k, std::int64_t v) { os << k << "=" << v << "\n"; }
    void u64(const char* k, std::uint64_t v) { os << k << "=" << v << "\n"; }
};

}  // namespace

std::string RunConfig::serialize() const {
    FieldWriter w;
    w.str("subcommand", subcommand);
    w.str("model", model);
    w.str("profile", profile);
    w.str("ref_model", ref_model);
    w.str("target_model", target_model);
    w.str("seq", seq);
    w.str("quantity", quantity);
    w.num("emin", emin);
    w.num("emax", emax);
    w.i64("ne", ne);
    w.num("eta", eta);
    w.i64("n", n);
    w.i64("ref_n", ref_n);
    w.i64("k", k);
    w.i64("degree", degree);
    w.num("eps", eps);
    w.i64("nodes", nodes);
    w.u64("seed", seed);
    w.i64("r", r);
    w.i64("n_alpha", n_alpha);
    w.i64("n_omega", n_omega);
    w.i64("n_inner", n_inner);
    w.num("tol", tol);
    w.str("out", out);
    w.i64("no_timestamp", no_timestamp ? 1 : 0);
    w.i64("threads", threads);
    return w.os.str();
}

RunConfig RunConfig::deserialize(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("RunConfig: bad line '" + line + "'");
        }
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        const auto as_f = [&] { return std::stod(val); };
        const auto as_i = [&] { return static_cast<std::int64_t>(std::stoll(val)); };
        if (key == "subcommand") cfg.subcommand = val;
        else if (key == "model") cfg.model = val;
        else if (key == "profile") cfg.profile = val;
        else if (key == "ref_model") cfg.ref_model = val;
        else if (key == "target_model") cfg.target_model = val;
        else if (key == "seq") cfg.seq = val;
        else if (key == "quantity") cfg.quantity = val;
        else if (key == "emin") cfg.emin = as_f();
        else if (key == "emax") cfg.emax = as_f();
        else if (key == "ne") cfg.ne = as_i();
        else if (key == "eta") cfg.eta = as_f();
        else if (key == "n") cfg.n = as_i();
        else if (key == "ref_n") cfg.ref_n = as_i();
        else if (key == "k") cfg.k = as_i();
        else if (key == "degree") cfg.degree = static_cast<int>(as_i());
        else if (key == "eps") cfg.eps = as_f();
        else if (key == "nodes") cfg.nodes = as_i();
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(std::stoull(val));
        else if (key == "r") cfg.r = static_cast<int>(as_i());
        else if (key == "n_alpha") cfg.n_alpha = as_i();
        else if (key == "n_omega") cfg.n_omega = as_i();
        else if (key == "n_inner") cfg.n_inner = as_i();
        else if (key == "tol") cfg.tol = as_f();
        else if (key == "out") cfg.out = val;
        else if (key == "no_timestamp") cfg.no_timestamp = as_i() != 0;
        else if (key == "threads") cfg.threads = static_cast<int>(as_i());
        else throw std::invalid_argument("RunConfig: unknown key '" + key + "'");
    }
    return cfg;
}

void RunConfig::validate() const {
    if (ne < 1) throw std::invalid_argument("config: ne must be >= 1");
    if (!(emin <= emax)) throw std::invalid_argument("config: emin must be <= emax");
    if (!std::isfinite(emin) || !std::isfinite(emax) || !std::isfinite(eta) ||
        !std::isfinite(eps) || !std::isfinite(tol)) {
        throw std::invalid_argument("config: numeric fields must be finite");
    }
    if (n < 1) throw std::invalid_argument("config: n must be >= 1");
    if (k < 0) throw std::invalid_argument("config: k must be >= 0");
    if (!(eta >= 0.0)) throw std::invalid_argument("config: eta must be >= 0");
    if (threads < 0) throw std::invalid_argument("config: threads must be >= 0");
}

namespace {

// ---------------------------------------------------------------------------
// Computation tables

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;  // successful rows, grid order
    bool partial = false;
    std::string first_error;
};

std::vector<double> energy_grid(const RunConfig& cfg) {
    std::vector<double> grid(static_cast<std::size_t>(cfg.ne));
    for (std::int64_t i = 0; i < cfg.ne; ++i) {
        grid[static_cast<std::size_t>(i)] =
            cfg.ne == 1 ? cfg.emin
                        : cfg.emin + (cfg.emax - cfg.emin) * static_cast<double>(i) /
                              static_cast<double>(cfg.ne - 1);
    }
    return grid;
}

// Evaluates one row per grid point in parallel.  Row failures are recorded,
// not propagated, so one bad energy cannot destroy a sweep.
Table run_grid(std::vector<std::string> columns, const std::vector<double>& grid,
               const std::function<std::vector<double>(double)>& row_fn) {
    Table t;
    t.columns = std::move(columns);
    std::vector<std::optional<std::vector<double>>> slots(grid.size());
    std::vector<std::string> errors(grid.size());
    parallel_for(static_cast<std::int64_t>(grid.size()), [&](std::int64_t i) {
        try {
            slots[static_cast<std::size_t>(i)] = row_fn(grid[static_cast<std::size_t>(i)]);
        } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(i)] = e.what();
        }
    });
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i]) {
            t.rows.push_back(std::move(*slots[i]));
        } else {
            t.partial = true;
            if (t.first_error.empty()) t.first_error = errors[i];
        }
    }
    return t;
}

// Cache the coefficient arrays once per sweep when the range is small
// enough to hold; rules with heavy per-site arithmetic gain the most.
Coefficients maybe_materialize(const Coefficients& j, std::int64_t len) {
    if (len >= 1 && len <= 20000000) return materialize(j, 0, len);
    return j;
}

ProfileFunction require_profile(const RunConfig& cfg) {
    if (cfg.profile.empty()) {
        throw std::invalid_argument("this subcommand needs --profile");
    }
    return ProfileFunction::parse(cfg.profile);
}

std::optional<ProfileFunction> optional_profile(const RunConfig& cfg) {
    if (cfg.profile.empty()) return std::nullopt;
    return ProfileFunction::parse(cfg.profile);
}

Coefficients build_model(const RunConfig& cfg) {
    const std::optional<ProfileFunction> f = optional_profile(cfg);
    return make_model(cfg.model, f ? &*f : nullptr);
}

void require_positive_eta(const RunConfig& cfg) {
    if (!(cfg.eta > 0.0)) {
        throw std::invalid_argument("this subcommand needs --eta > 0");
    }
}

Table compute(const RunConfig& cfg) {
    const std::string& sc = cfg.subcommand;

    if (sc == "lyapunov") {
        const Coefficients j = maybe_materialize(build_model(cfg), cfg.n);
        return run_grid({"E", "L"}, energy_grid(cfg), [&](double e) {
            return std::vector<double>{
                e, lyapunov_finite(j, ComplexEnergy{e, cfg.eta}, 0, cfg.n)};
        });
    }

    if (sc == "ids") {
        const Window w = extract_window(build_model(cfg), 0, cfg.n);
        return run_grid({"E", "k"}, energy_grid(cfg), [&](double e) {
            return std::vector<double>{e, ids_estimate(w, e)};
        });
    }

    if (sc == "thouless-check") {
        const Coefficients j = maybe_materialize(build_model(cfg), cfg.n);
        const DOSMeasure nu = dos_measure(j, cfg.n, cfg.tol);
        const double mla = mean_log_a(j, cfg.n);
        return run_grid({"E", "lhs", "rhs", "gap"}, energy_grid(cfg), [&](double e) {
            const ComplexEnergy z{e, cfg.eta};
            const double lhs =
                cosine_sine(j, z, cfg.n).c.log_abs() / static_cast<double>(cfg.n);
            const double rhs = thouless_rhs(nu, mla, z);
            return std::vector<double>{e, lhs, rhs, std::fabs(lhs - rhs)};
        });
    }

    if (sc == "mfunction") {
        require_positive_eta(cfg);
        const Coefficients j = build_model(cfg);
        return run_grid({"E", "re", "im"}, energy_grid(cfg), [&](double e) {
            const MFunctionValue m = m_plus(j, ComplexEnergy{e, cfg.eta}, cfg.tol);
            return std::vector<double>{e, m.value.real(), m.value.imag()};
        });
    }

    if (sc == "average") {
        const ProfileFunction f = require_profile(cfg);
        const Coefficients j = maybe_materialize(build_model(cfg), cfg.n);
        const bool want_ids = cfg.quantity == "ids";
        if (!want_ids && cfg.quantity != "lyapunov") {
            throw std::invalid_argument("config: quantity must be lyapunov or ids");
        }
        if (want_ids && cfg.r >= 1) {
            throw std::invalid_argument("config: sampled averages cover the Lyapunov quantity only");
        }
        std::optional<Window> w;
        if (want_ids) w = extract_window(j, 0, cfg.n);
        return run_grid({"E", "direct", "averaged", "gap"}, energy_grid(cfg),
                        [&](double e) {
            const double direct =
                want_ids ? ids_estimate(*w, e)
                         : lyapunov_finite(j, ComplexEnergy{e, cfg.eta}, 0, cfg.n);
            double averaged;
            if (cfg.r >= 1) {
                averaged = average_skew_mc(f, e, cfg.r, cfg.n_alpha, cfg.n_omega,
                                           cfg.n_inner, cfg.seed)
                               .mean;
            } else {
                averaged = average_r0(
                               f, e, want_ids ? AvgQuantity::ids : AvgQuantity::lyapunov,
                               cfg.nodes)
                               .value;
            }
            return std::vector<double>{e, direct, averaged, std::fabs(direct - averaged)};
        });
    }

    if (sc == "drr") {
        const Coefficients j = build_model(cfg);
        Table t;
        t.columns = {"N", "value"};
        t.rows.push_back({static_cast<double>(cfg.n), drr_statistic(j, cfg.n, cfg.eps)});
        return t;
    }

    if (sc == "measure-dist") {
        if (cfg.ref_model.empty()) {
            throw std::invalid_argument("measure-dist needs --ref-model");
        }
        const std::optional<ProfileFunction> f = optional_profile(cfg);
        const Coefficients j = make_model(cfg.model, f ? &*f : nullptr);
        const Coefficients ref = make_model(cfg.ref_model, f ? &*f : nullptr);
        const std::int64_t nref = cfg.ref_n > 0 ? cfg.ref_n : cfg.n;
        const double d = cylinder_distance(empirical_measure(j, cfg.n, cfg.k),
                                           empirical_measure(ref, nref, cfg.k),
                                           cfg.degree);
        Table t;
        t.columns = {"N", "distance"};
        t.rows.push_back({static_cast<double>(cfg.n), d});
        return t;
    }

    if (sc == "equidist") {
        if (cfg.seq.empty()) throw std::invalid_argument("equidist needs --seq");
        const SequenceSpec s = SequenceSpec::parse(cfg.seq);
        Table t;
        t.columns = {"N", "discrepancy"};
        t.rows.push_back({static_cast<double>(cfg.n), star_discrepancy(s, cfg.n)});
        return t;
    }

    if (sc == "reflectionless") {
        require_positive_eta(cfg);
        const Coefficients j = build_model(cfg);
        return run_grid({"E", "defect"}, energy_grid(cfg), [&](double e) {
            return std::vector<double>{
                e, reflectionless_defect(j, e, cfg.eta, cfg.tol)};
        });
    }

    if (sc == "convergence") {
        const std::optional<ProfileFunction> f = optional_profile(cfg);
        const Coefficients j = make_model(cfg.model, f ? &*f : nullptr);
        const Target target =
            cfg.target_model.empty()
                ? Target::free_torus()
                : Target::single_operator(make_model(cfg.target_model, f ? &*f : nullptr));
        Table t;
        t.columns = {"N", "value"};
        t.rows.push_back({static_cast<double>(cfg.n),
                          convergence_in_probability(j, target, cfg.n, cfg.eps, cfg.k)});
        return t;
    }

    throw std::invalid_argument("unknown subcommand '" + sc + "'");
}

std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_csv(std::ostream& os, const RunConfig& cfg, const Table& t) {
    os << "# " << kArtifactVersion << "\n";
    std::istringstream meta(cfg.serialize());
    std::string line;
    while (std::getline(meta, line)) os << "# " << line << "\n";
    if (!cfg.no_timestamp) os << "# timestamp=" << utc_timestamp() << "\n";
    os << "# status=" << (t.partial ? "partial" : "ok") << "\n";
    if (t.partial && !t.first_error.empty()) {
        os << "# error=" << t.first_error << "\n";
    }
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        os << (c ? "," : "") << t.columns[c];
    }
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            os << (c ? "," : "") << fmt17(row[c]);
        }
        os << "\n";
    }
}

}  // namespace

int run(const RunConfig& cfg) {
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    set_max_threads(cfg.threads);

    Table t;
    try {
        t = compute(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }

    if (cfg.out.empty()) {
        write_csv(std::cout, cfg, t);
    } else {
        std::ofstream os(cfg.out);
        if (!os) {
            std::cerr << "config error: cannot open output file '" << cfg.out << "'\n";
            return 2;
        }
        write_csv(os, cfg, t);
    }
    if (t.partial) {
        std::cerr << "numerical failure: " << t.first_error << "\n";
        return 3;
    }
    return 0;
}

int main_cli(int argc, char** argv) {
    CLI::App app{"Spectral diagnostics for bounded Jacobi operators"};
    app.set_version_flag("--version", kArtifactVersion);
    app.require_subcommand(1);

    RunConfig cfg;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("-o,--out", cfg.out, "write CSV here instead of stdout");
        sub->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
        sub->add_flag("--no-timestamp", cfg.no_timestamp,
                      "omit the timestamp metadata line (byte-stable output)");
        sub->add_option("--tol", cfg.tol, "tolerance for iterative routines");
    };
    const auto add_model = [&](CLI::App* sub) {
        sub->add_option("-m,--model", cfg.model,
                        "coefficient family, e.g. free, constant:1, periodic:0,1, "
                        "anderson:42,1, sparse:1, decaying:5,0.5, nrho:0.5, "
                        "skew:2,0.37,0,0");
        sub->add_option("-p,--profile", cfg.profile,
                        "sampling function for nrho/skew models, e.g. trig:0,1 "
                        "or identity or linear:0,0,1,1 or table:path");
    };
    const auto add_grid = [&](CLI::App* sub) {
        sub->add_option("--emin", cfg.emin, "grid start energy");
        sub->add_option("--emax", cfg.emax, "grid end energy");
        sub->add_option("--ne", cfg.ne, "number of grid energies");
        sub->add_option("--eta", cfg.eta, "imaginary part of the energy");
    };
    const auto add_n = [&](CLI::App* sub) {
        sub->add_option("-n,--n", cfg.n, "volume / number of samples");
    };

    CLI::App* lyap = app.add_subcommand("lyapunov", "finite-volume Lyapunov exponent sweep");
    add_model(lyap); add_grid(lyap); add_n(lyap); add_common(lyap);

    CLI::App* ids = app.add_subcommand("ids", "integrated density of states sweep");
    add_model(ids); add_grid(ids); add_n(ids); add_common(ids);

    CLI::App* thou = app.add_subcommand(
        "thouless-check", "box log-potential identity: (1/N)log|c| vs the eigenvalue sum");
    add_model(thou); add_grid(thou); add_n(thou); add_common(thou);

    CLI::App* mf = app.add_subcommand("mfunction", "half-line m-function sweep (needs eta > 0)");
    add_model(mf); add_grid(mf); add_n(mf); add_common(mf);

    CLI::App* avg = app.add_subcommand(
        "average", "direct finite-volume values vs family averages");
    add_model(avg); add_grid(avg); add_n(avg); add_common(avg);
    avg->add_option("--quantity", cfg.quantity, "lyapunov or ids");
    avg->add_option("--nodes", cfg.nodes, "quadrature nodes for parameter averages");
    avg->add_option("--r", cfg.r, "torus dimension (0 = closed-form average)");
    avg->add_option("--n-alpha", cfg.n_alpha, "alpha samples for sampled averages");
    avg->add_option("--n-omega", cfg.n_omega, "omega samples per alpha");
    avg->add_option("--n-inner", cfg.n_inner, "transfer length per sample");
    avg->add_option("--seed", cfg.seed, "sampling seed");

    CLI::App* drr = app.add_subcommand(
        "drr", "density of sites deviating from the free coefficients");
    add_model(drr); add_n(drr); add_common(drr);
    drr->add_option("--eps", cfg.eps, "deviation threshold");

    CLI::App* md = app.add_subcommand(
        "measure-dist", "moment distance between two empirical measures");
    add_model(md); add_n(md); add_common(md);
    md->add_option("--ref-model", cfg.ref_model, "comparison coefficient family");
    md->add_option("--ref-n", cfg.ref_n, "comparison volume (default: same as -n)");
    md->add_option("-k,--k", cfg.k, "window radius");
    md->add_option("--degree", cfg.degree, "moment dictionary degree (1 or 2)");

    CLI::App* eq = app.add_subcommand("equidist", "star discrepancy of a mod-1 sequence");
    add_n(eq); add_common(eq);
    eq->add_option("--seq", cfg.seq, "nrho:rho | rotation:alpha | skew:r,alpha[,w...]");

    CLI::App* refl = app.add_subcommand(
        "reflectionless", "two-sided m-function cancellation defect (needs eta > 0)");
    add_model(refl); add_grid(refl); add_common(refl);

    CLI::App* conv = app.add_subcommand(
        "convergence", "fraction of shifts staying far from a target operator");
    add_model(conv); add_n(conv); add_common(conv);
    conv->add_option("--target-model", cfg.target_model,
                     "target coefficient family (default: free)");
    conv->add_option("--eps", cfg.eps, "distance threshold");
    conv->add_option("-k,--k", cfg.k, "metric truncation radius");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    cfg.subcommand = app.get_subcommands().front()->get_name();
    return run(cfg);
}

}  // namespace jacobi

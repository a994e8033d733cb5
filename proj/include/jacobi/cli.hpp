#pragma once

// Command-line front end: a RunConfig that round-trips through text, a
// dispatcher running one configured computation to CSV, and the argv entry
// point with one subcommand per exposed quantity.

#include <cstdint>
#include <string>

namespace jacobi {

inline constexpr const char* kArtifactVersion = "jspec 1.0.0";

struct RunConfig {
    std::string subcommand;

    std::string model = "free";   // coefficient family descriptor
    std::string profile;          // sampling-function descriptor (if needed)
    std::string ref_model;        // measure-dist comparison operator
    std::string target_model;     // convergence target ("" = free family)
    std::string seq;              // equidist sequence descriptor
    std::string quantity = "lyapunov";  // average: lyapunov | ids

    double emin = -3.0;
    double emax = 3.0;
    std::int64_t ne = 1;
    double eta = 0.0;             // imaginary part of the energy
    std::int64_t n = 1000;        // main volume / sample length
    std::int64_t ref_n = 0;       // measure-dist reference volume (0 = n)
    std::int64_t k = 16;          // window / metric truncation radius
    int degree = 2;               // moment dictionary degree
    double eps = 0.5;
    std::int64_t nodes = 4096;    // quadrature nodes
    std::uint64_t seed = 1;
    int r = 0;                    // torus dimension for averaged families
    std::int64_t n_alpha = 64;
    std::int64_t n_omega = 4;
    std::int64_t n_inner = 100000;
    double tol = 1e-10;

    std::string out;              // CSV path; empty = stdout
    bool no_timestamp = false;
    int threads = 0;              // 0 = all cores

    // "key=value" lines in a fixed order; doubles at full precision, so
    // deserialize(serialize()) reproduces every field bit-exactly.
    std::string serialize() const;
    static RunConfig deserialize(const std::string& text);

    // Structural checks shared by every subcommand (grid shape, positive
    // sizes); throws std::invalid_argument.
    void validate() const;
};

// Runs one computation and writes CSV (metadata lines prefixed with '#',
// then a column header, then rows).  Returns 0 on success, 2 for invalid
// configuration, 3 when a numerical routine failed; in the latter case the
// rows that did succeed are still written and flagged "# status=partial".
int run(const RunConfig& cfg);

// argv front end (CLI11 subcommands); returns a process exit code.
int main_cli(int argc, char** argv);

}  // namespace jacobi

// Run configuration: an INI-style file (key = value under
// [section] headers) parsed into RunConfig. Unknown sections or keys are errors.
//
//   [model]       omega, gamma, delta
//   [grid]        g_start, g_stop, g_count
//   [solver]      k_levels, n_trunc, adaptive, rel_tol, n_start, n_cap,
//                 solver (parity_blocks | dense), parity (both | + | -), gap_window
//   [gfunction]   n_terms_max, tail_tolerance, pole_guard, scan_points
//   [confluence]  n_max, solver_tol
//   [slowmode]    n_max, k_levels, q_half_width, n_points, potential_points
//   [crosscheck]  checks, gfunction_tol, bic_tol, bic_n_max, bic_levels,
//                 harmonic_tol, harmonic_n_max, harmonic_levels, harmonic_fraction
//   [output]      path, format (csv | json)
//   [run]         threads

#pragma once

#include "stark/exact_diag.hpp"
#include "stark/gfunction.hpp"
#include "stark/model.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stark {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Mode { sweep, gfunction, confluence, slowmode, crosscheck };
enum class OutputFormat { csv, json };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);  // throws ConfigError
std::string to_string(OutputFormat format);

struct GridSpec {
    double start{0.0};
    double stop{0.0};
    std::size_t count{1};

    // count points, endpoints included; count == 1 gives {start}.
    std::vector<double> values() const;
};

struct RunConfig {
    Mode mode{Mode::sweep};
    ModelParams params;
    GridSpec grid;

    // [solver]
    std::size_t k_levels{10};
    std::size_t n_trunc{200};
    bool adaptive{false};
    double rel_tol{1e-10};
    std::size_t n_start{0};
    std::size_t n_cap{4000};
    SolverKind solver{SolverKind::parity_blocks};
    std::optional<Parity> parity;
    std::size_t gap_window{1};

    // [gfunction]
    GSeriesSettings gseries;
    std::size_t scan_points{64};

    // [confluence]
    int confluence_n_max{4};
    double confluence_tol{1e-10};

    // [slowmode]
    int slow_n_max{7};
    std::size_t slow_k_levels{8};
    double q_half_width{12.0};
    std::size_t n_points{2001};
    std::size_t potential_points{0};

    // [crosscheck]
    bool check_gfunction{true};
    bool check_bic{true};
    bool check_harmonic{true};
    double gfunction_tol{1e-7};
    double bic_tol{0.05};
    int bic_n_max{4};
    std::size_t bic_levels{160};
    double harmonic_tol{0.3};
    int harmonic_n_max{7};
    std::size_t harmonic_levels{80};
    double harmonic_fraction{0.5};

    // [output]
    std::string output_path{"stark_spectra.csv"};
    OutputFormat format{OutputFormat::csv};

    // [run]
    unsigned threads{1};

    // Throws ConfigError on out-of-range values.
    void validate() const;
};

// Throws ConfigError with the offending section / key.
RunConfig parse_config(std::istream& in, Mode mode);
RunConfig load_config(const std::string& path, Mode mode);

// Every effective setting as (section.key, value) in a fixed order.
std::vector<std::pair<std::string, std::string>> describe(const RunConfig& config);

}  // namespace stark

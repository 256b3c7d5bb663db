// Per-level comparison of the three spectrum sources:
// G-function roots, exact diagonalization, and the analytic confluence and
// slow-mode spectra.

#pragma once

#include "stark/exact_diag.hpp"
#include "stark/gfunction.hpp"
#include "stark/model.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace stark {

struct CrosscheckSettings {
    ModelParams params;            // g is taken from g_grid
    std::vector<double> g_grid;
    std::size_t n_trunc{200};
    SolverKind solver{SolverKind::parity_blocks};
    unsigned threads{1};

    bool check_gfunction{true};
    bool check_bic{true};
    bool check_harmonic{true};

    // (a) lowest levels per parity, absolute tolerance
    std::size_t gfunction_levels{10};
    double gfunction_tol{1e-7};
    GSeriesSettings gseries;
    std::size_t scan_points{64};

    // (b) BIC n = 0..bic_n_max against the preBIC of parity (-1)^n, relative tolerance
    int bic_n_max{4};
    std::size_t bic_levels{160};  // levels per parity diagonalized to reach the preBICs
    double bic_tol{0.05};
    double bic_solver_tol{1e-10};

    // (c) harmonic band levels n = 0..harmonic_n_max, absolute tolerance on the
    // distance to the nearest exact level; only g <= harmonic_fraction * g*
    int harmonic_n_max{7};
    std::size_t harmonic_levels{80};  // levels over both parities
    double harmonic_tol{0.3};
    double harmonic_fraction{0.5};

    void validate() const;
};

struct CrosscheckEntry {
    std::string check;  // "gfunction", "bic", "harmonic_a", "harmonic_b"
    double g{0.0};
    int level_index{0};
    int parity{0};      // +1, -1, or 0 when not parity resolved
    double reference{0.0};   // exact diagonalization
    double candidate{0.0};   // G-function root or analytic level
    double discrepancy{0.0};
    double tolerance{0.0};
    bool flagged{false};
};

struct CrosscheckNote {
    std::string check;
    double g{0.0};
    std::string message;
};

struct CrosscheckReport {
    std::vector<CrosscheckEntry> entries;
    std::vector<CrosscheckNote> notes;
    std::vector<double> max_residual;  // exact-diag residual per g-column

    bool any_flagged() const;
    // Largest discrepancy of one check; NaN when the check produced no entries.
    double max_discrepancy(const std::string& check) const;
};

CrosscheckReport crosscheck(const CrosscheckSettings& settings);

// Nearest G-function roots to each exact level of one parity. Levels without a
// root nearby show up as large discrepancies (exceptional eigenvalues have none).
std::vector<double> gfunction_partners(const ModelParams& params, Parity parity,
                                       const std::vector<double>& exact_levels,
                                       const GSeriesSettings& gseries, std::size_t scan_points);

}  // namespace stark

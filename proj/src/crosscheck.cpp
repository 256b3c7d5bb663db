#include "stark/crosscheck.hpp"

#include "stark/confluence.hpp"
#include "stark/errors.hpp"
#include "stark/parallel.hpp"
#include "stark/slow_mode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace stark {

void CrosscheckSettings::validate() const {
    params.validate();
    if (g_grid.empty()) throw std::invalid_argument("crosscheck: empty g grid");
    if (n_trunc < 2) throw std::invalid_argument("crosscheck: n_trunc must be >= 2");
    if (!(gfunction_tol > 0.0) || !(bic_tol > 0.0) || !(harmonic_tol > 0.0) || !(bic_solver_tol > 0.0)) {
        throw std::invalid_argument("crosscheck: tolerances must be > 0");
    }
    if (!(harmonic_fraction > 0.0)) throw std::invalid_argument("crosscheck: harmonic_fraction must be > 0");
    if (gfunction_levels < 1 || bic_levels < 1 || harmonic_levels < 1) {
        throw std::invalid_argument("crosscheck: level counts must be >= 1");
    }
    gseries.validate();
}

bool CrosscheckReport::any_flagged() const {
    return std::any_of(entries.begin(), entries.end(), [](const CrosscheckEntry& e) { return e.flagged; });
}

double CrosscheckReport::max_discrepancy(const std::string& check) const {
    double out = std::numeric_limits<double>::quiet_NaN();
    for (const auto& e : entries) {
        if (e.check != check) continue;
        out = std::isnan(out) ? e.discrepancy : std::max(out, e.discrepancy);
    }
    return out;
}

std::vector<double> gfunction_partners(const ModelParams& params, Parity parity,
                                       const std::vector<double>& exact_levels,
                                       const GSeriesSettings& gseries, std::size_t scan_points) {
    std::vector<double> out;
    if (exact_levels.empty()) return out;
    const auto [lo_it, hi_it] = std::minmax_element(exact_levels.begin(), exact_levels.end());
    const double lo = *lo_it - 0.5;
    const double hi = *hi_it + 0.05 * std::max(1.0, std::abs(*hi_it));
    const std::vector<double> roots = find_roots(params, parity, lo, hi, gseries, scan_points);
    for (double e : exact_levels) {
        double best = std::numeric_limits<double>::quiet_NaN();
        for (double r : roots) {
            if (std::isnan(best) || std::abs(r - e) < std::abs(best - e)) best = r;
        }
        out.push_back(best);
    }
    return out;
}

namespace {

struct Column {
    std::vector<CrosscheckEntry> entries;
    std::vector<CrosscheckNote> notes;
    double residual{0.0};
};

void check_gfunction(const CrosscheckSettings& s, const ModelParams& p, Column& col) {
    if (!p.subcritical()) {
        col.notes.push_back({"gfunction", p.g, "skipped: requires gamma < omega"});
        return;
    }
    const std::size_t k = std::min(s.gfunction_levels, s.n_trunc);
    const TruncatedHamiltonian h = build_hamiltonian(p, s.n_trunc);
    for (Parity parity : {Parity::positive, Parity::negative}) {
        const EigenSolution sol = diagonalize(h, k, {s.solver, parity});
        col.residual = std::max(col.residual, sol.max_residual);
        std::vector<double> partners;
        try {
            partners = gfunction_partners(p, parity, sol.energies, s.gseries, s.scan_points);
        } catch (const std::exception& ex) {
            col.notes.push_back({"gfunction", p.g, std::string("root search failed: ") + ex.what()});
            continue;
        }
        for (std::size_t i = 0; i < sol.size(); ++i) {
            CrosscheckEntry e{"gfunction", p.g, static_cast<int>(i), sign_of(parity), sol.energies[i],
                              partners[i], std::abs(partners[i] - sol.energies[i]), s.gfunction_tol, false};
            if (std::isnan(partners[i])) e.discrepancy = std::numeric_limits<double>::infinity();
            e.flagged = !(e.discrepancy <= e.tolerance);
            col.entries.push_back(e);
        }
    }
}

void check_bic(const CrosscheckSettings& s, const ModelParams& p, Column& col) {
    if (!(p.g > 0.0)) {
        col.notes.push_back({"bic", p.g, "skipped: requires g > 0"});
        return;
    }
    const ConfluenceSpectrum bic = bic_energies(CriticalParams::from(p), s.bic_n_max, s.bic_solver_tol);
    for (const auto& f : bic.failures) {
        col.notes.push_back({"bic", p.g, "n=" + std::to_string(f.n) + ": " + f.reason});
    }
    const std::size_t k = std::min(s.bic_levels, s.n_trunc);
    const TruncatedHamiltonian h = build_hamiltonian(p, s.n_trunc);
    const EigenSolution even = diagonalize(h, k, {s.solver, Parity::positive});
    const EigenSolution odd = diagonalize(h, k, {s.solver, Parity::negative});
    col.residual = std::max({col.residual, even.max_residual, odd.max_residual});

    for (int n = 0; n <= s.bic_n_max; ++n) {
        const std::vector<double> roots = bic.energies_for(n);
        if (roots.empty()) continue;
        const double e_bic = roots.front();
        const Parity parity = n % 2 == 0 ? Parity::positive : Parity::negative;
        const EigenSolution& sol = parity == Parity::positive ? even : odd;
        const auto idx = locate_prebic(sol, n, e_bic, parity);
        if (!idx) {
            col.notes.push_back({"bic", p.g, "n=" + std::to_string(n) + ": no isolated preBIC (hybridized)"});
            continue;
        }
        const double e_ed = sol.energies[*idx];
        CrosscheckEntry e{"bic", p.g, n, sign_of(parity), e_ed, e_bic,
                          std::abs(e_ed - e_bic) / std::max(std::abs(e_bic), 1e-300), s.bic_tol, false};
        e.flagged = !(e.discrepancy <= e.tolerance);
        col.entries.push_back(e);
    }
}

void check_harmonic(const CrosscheckSettings& s, const ModelParams& p, Column& col) {
    double onset = 0.0;
    try {
        onset = double_well_onset(p);
    } catch (const DomainError& ex) {
        col.notes.push_back({"harmonic", p.g, std::string("skipped: ") + ex.what()});
        return;
    }
    if (p.g > s.harmonic_fraction * onset) {
        col.notes.push_back({"harmonic", p.g, "skipped: g beyond harmonic_fraction * double_well_onset"});
        return;
    }
    const std::size_t k = std::min(s.harmonic_levels, 2 * s.n_trunc);
    const EigenSolution sol = diagonalize(build_hamiltonian(p, s.n_trunc), k, {s.solver, std::nullopt});
    col.residual = std::max(col.residual, sol.max_residual);

    for (Band band : {Band::a, Band::b}) {
        std::vector<double> levels;
        try {
            levels = harmonic_band_levels(p, band, s.harmonic_n_max);
        } catch (const DomainError& ex) {
            col.notes.push_back({"harmonic_" + to_string(band), p.g, ex.what()});
            continue;
        }
        for (std::size_t n = 0; n < levels.size(); ++n) {
            const double e = levels[n];
            const auto above = std::lower_bound(sol.energies.begin(), sol.energies.end(), e);
            const bool has_above = above != sol.energies.end();
            const bool has_below = above != sol.energies.begin();
            double nearest = std::numeric_limits<double>::quiet_NaN();
            if (has_above) nearest = *above;
            if (has_below && (!has_above || e - *(above - 1) < *above - e)) nearest = *(above - 1);
            CrosscheckEntry entry{"harmonic_" + to_string(band), p.g, static_cast<int>(n), 0, nearest, e,
                                  std::abs(nearest - e), s.harmonic_tol, false};
            entry.flagged = !(entry.discrepancy <= entry.tolerance);
            col.entries.push_back(entry);
        }
    }
}

}  // namespace

CrosscheckReport crosscheck(const CrosscheckSettings& settings) {
    settings.validate();
    std::vector<Column> columns(settings.g_grid.size());
    parallel_for(columns.size(), settings.threads, [&](std::size_t c) {
        const ModelParams p = settings.params.with_g(settings.g_grid[c]);
        Column& col = columns[c];
        // Each source fails independently; the others still report.
        const auto guarded = [&](const char* name, auto&& fn) {
            try {
                fn(settings, p, col);
            } catch (const std::exception& ex) {
                col.notes.push_back({name, p.g, std::string("failed: ") + ex.what()});
            }
        };
        if (settings.check_gfunction) guarded("gfunction", check_gfunction);
        if (settings.check_bic) guarded("bic", check_bic);
        if (settings.check_harmonic) guarded("harmonic", check_harmonic);
    });

    CrosscheckReport report;
    for (const Column& col : columns) {
        report.entries.insert(report.entries.end(), col.entries.begin(), col.entries.end());
        report.notes.insert(report.notes.end(), col.notes.begin(), col.notes.end());
        report.max_residual.push_back(col.residual);
    }

    // Harmonic levels rise (band a) and fall (band b) with g.
    for (const std::string band : {"harmonic_a", "harmonic_b"}) {
        for (int n = 0; n <= settings.harmonic_n_max; ++n) {
            std::vector<const CrosscheckEntry*> series;
            for (const auto& e : report.entries) {
                if (e.check == band && e.level_index == n) series.push_back(&e);
            }
            for (std::size_t i = 1; i < series.size(); ++i) {
                const double step = series[i]->candidate - series[i - 1]->candidate;
                if ((band == "harmonic_a" && step < 0.0) || (band == "harmonic_b" && step > 0.0)) {
                    report.notes.push_back({band, series[i]->g, "level " + std::to_string(n) + " not monotone in g"});
                }
            }
        }
    }
    return report;
}

}  // namespace stark

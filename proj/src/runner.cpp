#include "stark/runner.hpp"

#include "stark/confluence.hpp"
#include "stark/crosscheck.hpp"
#include "stark/errors.hpp"
#include "stark/exact_diag.hpp"
#include "stark/gfunction.hpp"
#include "stark/output.hpp"
#include "stark/parallel.hpp"
#include "stark/slow_mode.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

namespace stark {

namespace {

using Json = nlohmann::ordered_json;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

struct Outcome {
    std::vector<SpectrumRow> rows;
    std::optional<CrosscheckReport> report;
    std::vector<std::pair<std::string, std::string>> extra_files;  // path, content
    Json meta = Json::object();
    bool numerical_ok{true};
};

std::vector<Parity> parities_of(const RunConfig& c) {
    if (c.parity) return {*c.parity};
    return {Parity::positive, Parity::negative};
}

Outcome run_sweep(const RunConfig& c) {
    SweepOptions opts;
    if (!c.adaptive) opts.n_trunc = c.n_trunc;
    opts.rel_tol = c.rel_tol;
    opts.n_start = c.n_start;
    opts.n_cap = c.n_cap;
    opts.solver = c.solver;
    opts.threads = c.threads;
    opts.gap_window = c.gap_window;
    const SpectralGraph graph = sweep(c.params, c.grid.values(), c.k_levels, c.parity, opts);

    Outcome out;
    Json columns = Json::array();
    for (std::size_t col = 0; col < graph.column_count(); ++col) {
        bool finite = true;
        for (std::size_t k = 0; k < graph.level_count(); ++k) {
            const double e = graph.levels[k][col];
            finite = finite && std::isfinite(e);
            out.rows.push_back({graph.g_grid[col], k, e, graph.parities[k][col], graph.photon[k][col], "exact_diag"});
        }
        const bool converged = graph.column_converged[col] || !c.adaptive;
        out.numerical_ok = out.numerical_ok && finite && converged;
        columns.push_back({{"g", graph.g_grid[col]},
                           {"n_trunc", graph.column_n_trunc[col]},
                           {"converged", c.adaptive ? Json(graph.column_converged[col]) : Json("not assessed")},
                           {"max_residual", number_or_null(graph.column_residual[col])}});
    }
    Json crossings = Json::array();
    for (const auto& ac : graph.avoided_crossings) {
        crossings.push_back({{"parity", sign_of(ac.parity)},
                             {"lower", ac.lower},
                             {"upper", ac.upper},
                             {"g", ac.g},
                             {"gap", ac.gap},
                             {"energy", ac.energy}});
    }
    out.meta["columns"] = std::move(columns);
    out.meta["avoided_crossings"] = std::move(crossings);
    out.meta["level_matching"] = "sorted index within each g column";
    return out;
}

Outcome run_gfunction(const RunConfig& c) {
    const std::vector<double> grid = c.grid.values();
    const std::vector<Parity> parities = parities_of(c);
    std::vector<std::vector<std::vector<double>>> found(grid.size());
    parallel_for(grid.size(), c.threads, [&](std::size_t i) {
        const ModelParams p = c.params.with_g(grid[i]);
        for (Parity parity : parities) {
            found[i].push_back(lowest_roots(p, parity, c.k_levels, c.gseries, c.scan_points));
        }
    });

    Outcome out;
    Json counts = Json::array();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t s = 0; s < parities.size(); ++s) {
            const auto& roots = found[i][s];
            for (std::size_t k = 0; k < roots.size(); ++k) {
                out.rows.push_back({grid[i], k, roots[k], sign_of(parities[s]), kNaN, "gfunction"});
            }
            if (roots.size() < c.k_levels) out.numerical_ok = false;
            counts.push_back({{"g", grid[i]}, {"parity", sign_of(parities[s])}, {"roots", roots.size()}});
        }
    }
    out.meta["root_counts"] = std::move(counts);
    out.meta["note"] = "exceptional (pole-coincident) eigenvalues are not zeros of G and are absent";
    return out;
}

Outcome run_confluence(const RunConfig& c) {
    Outcome out;
    Json columns = Json::array();
    for (double g : c.grid.values()) {
        CriticalParams cp{c.params.omega, c.params.delta, g};
        const Thresholds t = thresholds(cp);
        Json col = {{"g", g}, {"e_thr", t.e_thr}, {"e_c", t.e_c}, {"small_continuum_upper", t.small_continuum_upper}};
        if (!(g > 0.0)) {
            col["note"] = "alpha undefined at g = 0; no roots";
            columns.push_back(std::move(col));
            continue;
        }
        col["lbs_window_open"] = lbs_window_open(cp);
        Json failures = Json::array();
        const ConfluenceSpectrum bic = bic_energies(cp, c.confluence_n_max, c.confluence_tol);
        for (const auto& r : bic.roots) {
            out.rows.push_back({g, static_cast<std::size_t>(r.n), r.energy, r.n % 2 == 0 ? 1 : -1, kNaN, "bic"});
        }
        for (const auto& f : bic.failures) failures.push_back({{"source", "bic"}, {"n", f.n}, {"reason", f.reason}});
        const ConfluenceSpectrum lbs = lbs_energies(cp, c.confluence_n_max, c.confluence_tol);
        for (const auto& r : lbs.roots) out.rows.push_back({g, static_cast<std::size_t>(r.n), r.energy, 0, kNaN, "lbs"});
        for (const auto& f : lbs.failures) failures.push_back({{"source", "lbs"}, {"n", f.n}, {"reason", f.reason}});
        col["bracket_failures"] = std::move(failures);
        columns.push_back(std::move(col));
    }
    out.meta["columns"] = std::move(columns);
    out.meta["gamma"] = "pinned to omega";
    out.meta["bic_parity"] = "(-1)^n";
    return out;
}

Outcome run_slowmode(const RunConfig& c) {
    Outcome out;
    Json columns = Json::array();
    std::ostringstream bands;
    if (c.potential_points > 0) bands << "g,q,band,energy\n";
    for (double g : c.grid.values()) {
        const ModelParams p = c.params.with_g(g);
        Json col = {{"g", g}};
        Json notes = Json::array();
        try {
            col["double_well_onset"] = double_well_onset(p);
        } catch (const DomainError& ex) {
            notes.push_back(ex.what());
        }
        if (p.gamma == p.omega) col["band_asymptote"] = band_asymptote(CriticalParams::from(p));
        for (Band band : {Band::a, Band::b}) {
            try {
                const auto levels = harmonic_band_levels(p, band, c.slow_n_max);
                for (std::size_t n = 0; n < levels.size(); ++n) {
                    out.rows.push_back({g, n, levels[n], 0, kNaN, "harmonic_" + to_string(band)});
                }
            } catch (const DomainError& ex) {
                notes.push_back(ex.what());
            }
            try {
                const auto levels = solve_band_schrodinger(p, band, c.q_half_width, c.n_points, c.slow_k_levels);
                for (std::size_t n = 0; n < levels.size(); ++n) {
                    out.rows.push_back({g, n, levels[n], 0, kNaN, "fd_" + to_string(band)});
                }
            } catch (const DomainError& ex) {
                notes.push_back(ex.what());
            } catch (const BoundaryTooTight& ex) {
                notes.push_back(ex.what());
                out.numerical_ok = false;
            }
            if (c.potential_points > 0) {
                const BandPotential pot = sample_band(p, band, c.q_half_width, c.potential_points);
                for (std::size_t i = 0; i < pot.q_grid.size(); ++i) {
                    bands << format_number(g) << ',' << format_number(pot.q_grid[i]) << ',' << to_string(band) << ','
                          << format_number(pot.values[i]) << '\n';
                }
            }
        }
        col["notes"] = std::move(notes);
        columns.push_back(std::move(col));
    }
    if (c.potential_points > 0) out.extra_files.emplace_back(c.output_path + ".bands.csv", bands.str());
    out.meta["columns"] = std::move(columns);
    out.meta["boundary"] = "Dirichlet";
    return out;
}

Outcome run_crosscheck(const RunConfig& c) {
    CrosscheckSettings s;
    s.params = c.params;
    s.g_grid = c.grid.values();
    s.n_trunc = c.n_trunc;
    s.solver = c.solver;
    s.threads = c.threads;
    s.check_gfunction = c.check_gfunction;
    s.check_bic = c.check_bic;
    s.check_harmonic = c.check_harmonic;
    s.gfunction_levels = c.k_levels;
    s.gfunction_tol = c.gfunction_tol;
    s.gseries = c.gseries;
    s.scan_points = c.scan_points;
    s.bic_n_max = c.bic_n_max;
    s.bic_levels = c.bic_levels;
    s.bic_tol = c.bic_tol;
    s.bic_solver_tol = c.confluence_tol;
    s.harmonic_n_max = c.harmonic_n_max;
    s.harmonic_levels = c.harmonic_levels;
    s.harmonic_tol = c.harmonic_tol;
    s.harmonic_fraction = c.harmonic_fraction;

    Outcome out;
    out.report = crosscheck(s);
    Json summary = Json::object();
    for (const char* check : {"gfunction", "bic", "harmonic_a", "harmonic_b"}) {
        summary[check] = number_or_null(out.report->max_discrepancy(check));
    }
    Json notes = Json::array();
    for (const auto& n : out.report->notes) notes.push_back({{"check", n.check}, {"g", n.g}, {"message", n.message}});
    Json residuals = Json::array();
    for (double r : out.report->max_residual) residuals.push_back(r);
    out.meta["max_discrepancy"] = std::move(summary);
    out.meta["flagged"] = out.report->any_flagged();
    out.meta["notes"] = std::move(notes);
    out.meta["max_residual"] = std::move(residuals);
    out.numerical_ok = !out.report->any_flagged();
    return out;
}

}  // namespace

int run(const RunConfig& config, std::ostream& log) {
    const auto started = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
        config.validate();
        switch (config.mode) {
            case Mode::sweep: outcome = run_sweep(config); break;
            case Mode::gfunction: outcome = run_gfunction(config); break;
            case Mode::confluence: outcome = run_confluence(config); break;
            case Mode::slowmode: outcome = run_slowmode(config); break;
            case Mode::crosscheck: outcome = run_crosscheck(config); break;
        }
    } catch (const ConfigError& ex) {
        log << "config error: " << ex.what() << '\n';
        return exit_config;
    } catch (const std::invalid_argument& ex) {
        log << "config error: " << ex.what() << '\n';
        return exit_config;
    } catch (const std::exception& ex) {
        log << "numerical error: " << ex.what() << '\n';
        return exit_numerical;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    std::ostringstream primary;
    if (outcome.report) {
        if (config.format == OutputFormat::csv) write_crosscheck_csv(primary, *outcome.report);
        else write_crosscheck_json(primary, *outcome.report);
    } else {
        if (config.format == OutputFormat::csv) write_spectrum_csv(primary, outcome.rows);
        else write_spectrum_json(primary, outcome.rows);
    }

    Json meta = Json::object();
    meta["schema_version"] = kSchemaVersion;
    meta["tool"] = "stark-spectra";
    meta["mode"] = to_string(config.mode);
    Json settings = Json::object();
    for (const auto& [key, value] : describe(config)) settings[key] = value;
    meta["settings"] = std::move(settings);
    meta["conventions"] = {{"hbar", 1}, {"energies", "Hamiltonian convention"}, {"number_format", "%.17g"}};
    for (auto& [key, value] : outcome.meta.items()) meta[key] = value;
    meta["numerical_ok"] = outcome.numerical_ok;
    meta["wall_time_seconds"] = wall;

    try {
        write_file(config.output_path, primary.str());
        for (const auto& [path, content] : outcome.extra_files) write_file(path, content);
        write_file(sidecar_path(config.output_path), meta.dump(1) + "\n");
    } catch (const IoError& ex) {
        log << "io error: " << ex.what() << '\n';
        return exit_io;
    }
    if (!outcome.numerical_ok) {
        log << "numerical checks failed; see " << sidecar_path(config.output_path) << '\n';
        return exit_numerical;
    }
    return exit_ok;
}

}  // namespace stark

#include "oracles.hpp"

#include "stark/errors.hpp"
#include "stark/exact_diag.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace stark;

TEST_CASE("two-photon Hamiltonian") {
    const TruncatedHamiltonian h = build_hamiltonian({1.0, 0.0, 0.0, 0.1}, 2);
    REQUIRE(h.dimension() == 4);
    const Eigen::MatrixXd m = h.to_dense();
    // |0,up> <-> |1,down> and |0,down> <-> |1,up>
    CHECK(m(0, 3) == doctest::Approx(0.1));
    CHECK(m(1, 2) == doctest::Approx(0.1));
    CHECK(m(0, 1) == 0.0);
    CHECK(m(0, 2) == 0.0);
    CHECK(m(2, 2) == doctest::Approx(1.0));
    CHECK(m.isApprox(m.transpose()));

    const auto want = oracle::two_photon_roots(1.0, 0.1);
    for (SolverKind solver : {SolverKind::parity_blocks, SolverKind::dense}) {
        const EigenSolution s = diagonalize(h, 4, {solver, std::nullopt});
        REQUIRE(s.size() == 4);
        for (std::size_t i = 0; i < 4; ++i) CHECK(s.energies[i] == doctest::Approx(want[i]).epsilon(1e-14));
    }
    CHECK(want[0] == doctest::Approx(-0.009901951359278516).epsilon(1e-14));
    CHECK(want[2] == doctest::Approx(1.0099019513592786).epsilon(1e-14));
}

TEST_CASE("entries, apply and norm bound") {
    const TruncatedHamiltonian h = build_hamiltonian({1.0, 0.3, 0.6, 0.8}, 12);
    const Eigen::MatrixXd m = h.to_dense();
    for (std::size_t i = 0; i < h.dimension(); ++i) {
        for (std::size_t j = 0; j < h.dimension(); ++j) {
            CHECK(h.entry(i, j) == m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        }
    }
    CHECK_THROWS_AS(h.entry(0, h.dimension()), std::out_of_range);
    std::mt19937 rng(3);
    std::normal_distribution<double> nd;
    Eigen::VectorXd v(static_cast<Eigen::Index>(h.dimension()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = nd(rng);
    CHECK((h.apply(v) - m * v).norm() < 1e-12 * (m * v).norm());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    CHECK(h.norm_bound() >= es.eigenvalues().cwiseAbs().maxCoeff());
    CHECK_THROWS_AS(build_hamiltonian({1.0, 0.0, 0.0, 0.1}, 1), std::invalid_argument);
}

TEST_CASE("parity chains reassemble the full matrix") {
    const TruncatedHamiltonian h = build_hamiltonian({1.0, 0.2, 0.7, 0.5}, 10);
    std::vector<bool> seen(h.dimension(), false);
    for (Parity p : {Parity::positive, Parity::negative}) {
        Eigen::VectorXd d, e;
        h.parity_chain(p, d, e);
        REQUIRE(d.size() == 10);
        REQUIRE(e.size() == 9);
        for (std::size_t n = 0; n < 10; ++n) {
            const std::size_t i = TruncatedHamiltonian::chain_index(p, n);
            CHECK_FALSE(seen[i]);
            seen[i] = true;
            // parity (-1)^n sigma_z of each chain member
            const double sz = (i % 2 == 0) ? 1.0 : -1.0;
            CHECK(sz * ((n % 2 == 0) ? 1.0 : -1.0) == sign_of(p));
        }
    }
    CHECK(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }));
}

TEST_CASE("spectrum, parity and photon content against an independent dense solve") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 6; ++trial) {
        const ModelParams p{1.0, 0.9 * u(rng), 1.5 * u(rng), 1.2 * u(rng)};
        const std::size_t n_trunc = 40;
        const auto ref = oracle::dense_spectrum(p.omega, p.gamma, p.delta, p.g, n_trunc);
        for (SolverKind solver : {SolverKind::parity_blocks, SolverKind::dense}) {
            const EigenSolution s = diagonalize(build_hamiltonian(p, n_trunc), 20, {solver, std::nullopt});
            REQUIRE(s.size() == 20);
            CHECK(s.max_residual < 1e-9);
            for (std::size_t i = 0; i < 20; ++i) {
                CHECK(s.energies[i] == doctest::Approx(ref.energies[i]).epsilon(1e-10).scale(1.0));
                // Exactly degenerate pairs may mix in the reference; compare only clean states.
                const bool isolated = (i == 0 || ref.energies[i] - ref.energies[i - 1] > 1e-6) &&
                                      (ref.energies[i + 1] - ref.energies[i] > 1e-6);
                if (isolated) {
                    CHECK(s.parity_expectation[i] == doctest::Approx(ref.parity[i]).epsilon(1e-8).scale(1.0));
                    CHECK(s.photon_content[i] == doctest::Approx(ref.photon[i]).epsilon(1e-8).scale(1.0));
                }
            }
        }
    }
}

TEST_CASE("parity-filtered diagonalization") {
    const TruncatedHamiltonian h = build_hamiltonian({1.0, 0.2, 0.7, 0.9}, 60);
    const EigenSolution all = diagonalize(h, 30);
    for (Parity p : {Parity::positive, Parity::negative}) {
        const EigenSolution one = diagonalize(h, 15, {SolverKind::parity_blocks, p});
        const EigenSolution dense = diagonalize(h, 15, {SolverKind::dense, p});
        const auto from_all = all.energies_of(p);
        for (std::size_t i = 0; i < 15; ++i) {
            CHECK(one.parity(i) == p);
            CHECK(std::abs(one.parity_expectation[i]) == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(one.energies[i] == doctest::Approx(dense.energies[i]).epsilon(1e-11).scale(1.0));
            if (i < from_all.size()) CHECK(one.energies[i] == doctest::Approx(from_all[i]).epsilon(1e-11).scale(1.0));
        }
    }
    CHECK_THROWS_AS(diagonalize(h, 0), std::invalid_argument);
    CHECK_THROWS_AS(diagonalize(h, 61, {SolverKind::parity_blocks, Parity::positive}), std::invalid_argument);
    CHECK_THROWS_AS(diagonalize(h, 121), std::invalid_argument);
}

TEST_CASE("Rayleigh-Ritz monotonicity under truncation growth") {
    const ModelParams p{1.0, 0.2, 0.7, 1.5};
    std::vector<double> prev;
    for (std::size_t n : {20, 30, 45, 70}) {
        const EigenSolution s = diagonalize(build_hamiltonian(p, n), 10);
        if (!prev.empty()) {
            for (std::size_t i = 0; i < 10; ++i) CHECK(s.energies[i] <= prev[i] + 1e-12);
        }
        prev = s.energies;
    }
}

TEST_CASE("adaptive truncation") {
    const ModelParams p{1.0, 0.2, 0.7, 1.0};
    const EigenSolution s = converged_spectrum(p, 10, 1e-10, 20, 2000);
    CHECK(s.converged);
    CHECK(s.verified_n_trunc > s.n_trunc);
    const EigenSolution ref = diagonalize(build_hamiltonian(p, 400), 10);
    for (std::size_t i = 0; i < 10; ++i) CHECK(s.energies[i] == doctest::Approx(ref.energies[i]).epsilon(1e-9).scale(1.0));

    const EigenSolution capped = converged_spectrum(p.with_g(3.0), 10, 1e-12, 10, 16);
    CHECK_FALSE(capped.converged);
    CHECK(capped.n_trunc == 16);

    CHECK_THROWS_AS(converged_spectrum(p, 10, 1e-10, 5, 100), std::invalid_argument);
}

TEST_CASE("sweep columns and thread independence") {
    const ModelParams p{1.0, 0.2, 0.7, 0.0};
    std::vector<double> grid;
    for (int i = 0; i <= 12; ++i) grid.push_back(0.1 * i);
    SweepOptions opts;
    opts.n_trunc = 80;
    const SpectralGraph one = sweep(p, grid, 12, Parity::positive, opts);
    opts.threads = 4;
    const SpectralGraph four = sweep(p, grid, 12, Parity::positive, opts);
    REQUIRE(one.level_count() == 12);
    REQUIRE(one.column_count() == grid.size());
    for (std::size_t c = 0; c < grid.size(); ++c) {
        for (std::size_t k = 0; k < 12; ++k) {
            CHECK(one.levels[k][c] == four.levels[k][c]);
            CHECK(one.parities[k][c] == 1);
            if (k > 0) CHECK(one.levels[k][c] >= one.levels[k - 1][c]);
        }
    }
    CHECK_THROWS_AS(sweep(p, {0.5, 0.1}, 4, std::nullopt, opts), std::invalid_argument);

    SweepOptions adaptive;
    adaptive.n_start = 20;
    const SpectralGraph ad = sweep(p, {0.3, 0.6}, 6, std::nullopt, adaptive);
    CHECK(ad.column_converged[0]);
    CHECK(ad.column_converged[1]);
}

TEST_CASE("avoided-crossing detection on a two-level model") {
    // E = c(g) +- sqrt(d0^2 + v^2 (g - g0)^2): the squared gap is quadratic in g.
    const double d0 = 0.05, v = 0.8, g0 = 0.537;
    SpectralGraph graph;
    for (int i = 0; i <= 40; ++i) graph.g_grid.push_back(0.025 * i);
    graph.levels.assign(2, std::vector<double>(graph.g_grid.size()));
    graph.parities.assign(2, std::vector<int>(graph.g_grid.size(), 1));
    graph.photon.assign(2, std::vector<double>(graph.g_grid.size(), 0.0));
    for (std::size_t c = 0; c < graph.g_grid.size(); ++c) {
        const double half = std::sqrt(d0 * d0 + v * v * (graph.g_grid[c] - g0) * (graph.g_grid[c] - g0));
        graph.levels[0][c] = 0.3 * graph.g_grid[c] - half;
        graph.levels[1][c] = 0.3 * graph.g_grid[c] + half;
    }
    const auto found = detect_avoided_crossings(graph);
    REQUIRE(found.size() == 1);
    CHECK(found[0].g == doctest::Approx(g0).epsilon(1e-9));
    CHECK(found[0].gap == doctest::Approx(2.0 * d0).epsilon(1e-9));
    CHECK(found[0].lower == 0);
    CHECK(found[0].parity == Parity::positive);

    // Opposite-parity levels are never paired.
    for (std::size_t c = 0; c < graph.g_grid.size(); ++c) graph.parities[1][c] = -1;
    CHECK(detect_avoided_crossings(graph).empty());

    SpectralGraph tiny;
    tiny.g_grid = {0.0, 1.0};
    tiny.levels = {{0.0, 0.0}, {1.0, 1.0}};
    tiny.parities = {{1, 1}, {1, 1}};
    CHECK(detect_avoided_crossings(tiny).empty());
}

TEST_CASE("preBIC classification and location") {
    EigenSolution s;
    s.energies = {0.5, 1.0, 1.5, 2.0};
    s.parity_expectation = {1.0, -1.0, 1.0, 1.0};
    s.photon_content = {0.2, 3.0, 2.1, 8.0};
    const auto low = classify_prebics(s, 1.0);
    REQUIRE(low.size() == 1);
    CHECK(low[0] == 0);
    CHECK(locate_prebic(s, 2, 1.45, Parity::positive).value() == 2);
    CHECK_FALSE(locate_prebic(s, 2, 1.45, Parity::negative).has_value());
    CHECK_FALSE(locate_prebic(s, 2, 3.5, Parity::positive).has_value());
    CHECK_FALSE(locate_prebic(s, 5, 1.45, Parity::positive).has_value());
}

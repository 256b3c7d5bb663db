#include "oracles.hpp"

#include "stark/confluence.hpp"
#include "stark/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace stark;

TEST_CASE("alpha at its boundary energies") {
    const CriticalParams cp{1.0, 0.7, 1.0};
    CHECK(alpha(cp, -0.7) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(alpha(cp, thresholds(cp).e_thr) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(alpha(cp, -0.7 - 1.0) == doctest::Approx(0.0).scale(1.0));
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(0.01, 2.0);
    for (int i = 0; i < 20; ++i) {
        const CriticalParams c{u(rng), u(rng), u(rng)};
        CHECK(std::abs(alpha(c, thresholds(c).e_thr) + 1.0) < 1e-12);
        CHECK(std::abs(alpha(c, -c.delta) - 1.0) < 1e-12);
    }
}

TEST_CASE("Lambda") {
    CHECK(lambda_value({1.0, 0.7, 1.0}, -0.7) == doctest::Approx(0.0).scale(1.0));
    CHECK(lambda_value({1.0, 0.0, 1.0}, 1.0) == doctest::Approx(1.0));
    for (const CriticalParams cp : {CriticalParams{1.0, 0.7, 1.0}, CriticalParams{1.0, 0.05, 0.5},
                                    CriticalParams{2.0, 0.3, 0.4}}) {
        const double e = thresholds(cp).e_thr;
        CHECK(lambda_value(cp, e) ==
              doctest::Approx(oracle::lambda_direct(cp.omega, cp.delta, cp.g, e)).epsilon(1e-13));
    }
}

TEST_CASE("g = 0 is outside the domain") {
    const CriticalParams cp{1.0, 0.7, 0.0};
    CHECK_THROWS_AS(alpha(cp, 0.0), DomainError);
    CHECK_THROWS_AS(lambda_value(cp, 0.0), DomainError);
    CHECK_THROWS_AS(classify_energy(cp, 0.0), DomainError);
    CHECK_THROWS_AS(bic_energies(cp, 3), DomainError);
    CHECK_THROWS_AS(lbs_energies(cp, 3), DomainError);
    CHECK_THROWS_AS(alpha({1.0, -0.1, 0.5}, 0.0), DomainError);
}

TEST_CASE("energy classification") {
    const CriticalParams cp{1.0, 0.7, 1.0};
    CHECK(classify_energy(cp, 0.0) == EnergyClass::discrete_upper);
    CHECK(classify_energy(cp, -1.5) == EnergyClass::small_continuum);
    CHECK(classify_energy(cp, -0.7) == EnergyClass::boundary_alpha_plus_one);
    CHECK(classify_energy(cp, -2.7) == EnergyClass::boundary_alpha_minus_one);
    // Delta - omega = -0.3 lies above E_thr here, so everything below E_thr is below threshold.
    CHECK(classify_energy(cp, -3.0) == EnergyClass::below_threshold);

    const CriticalParams low{1.0, 0.05, 0.3};  // Delta - omega = -0.95 < E_thr = -0.23
    CHECK(classify_energy(low, -0.5) == EnergyClass::discrete_lower_window);
    CHECK(classify_energy(low, -1.2) == EnergyClass::below_threshold);
    CHECK(to_string(EnergyClass::small_continuum) == "SmallContinuum");

    // The tags partition the line consistently with alpha.
    for (double e = -5.0; e <= 3.0; e += 0.01) {
        const double a = alpha(cp, e);
        const EnergyClass c = classify_energy(cp, e, 1e-12);
        if (std::abs(a - 1.0) > 1e-12 && std::abs(a + 1.0) > 1e-12) {
            if (a > 1.0) CHECK(c == EnergyClass::discrete_upper);
            else if (a > -1.0) CHECK(c == EnergyClass::small_continuum);
            else CHECK((c == EnergyClass::discrete_lower_window || c == EnergyClass::below_threshold));
        }
    }
}

TEST_CASE("thresholds") {
    const Thresholds t = thresholds({1.0, 0.7, 1.0});
    CHECK(t.e_thr == doctest::Approx(-2.7));
    CHECK(t.e_c == doctest::Approx(-1.7));
    CHECK(t.small_continuum_upper == doctest::Approx(-0.7));
    const Thresholds z = thresholds({1.0, 0.7, 0.0});
    CHECK(z.e_thr == -0.7);
    CHECK(z.e_c == -0.7);
    CHECK(z.small_continuum_upper == -0.7);
    for (double g : {0.01, 0.3, 1.0, 4.0}) {
        const Thresholds s = thresholds({1.0, 0.2, g});
        CHECK(s.e_thr < s.e_c);
        CHECK(s.e_c < s.small_continuum_upper);
    }
}

TEST_CASE("bound states in the continuum") {
    for (const CriticalParams cp : {CriticalParams{1.0, 0.7, 1.0}, CriticalParams{1.0, 0.05, 0.5},
                                    CriticalParams{1.0, 0.2, 0.3}, CriticalParams{1.5, 1.1, 0.8}}) {
        const ConfluenceSpectrum s = bic_energies(cp, 5, 1e-10);
        CHECK(s.failures.empty());
        const double floor = std::max(-cp.delta, cp.delta - cp.omega);
        for (const auto& r : s.roots) {
            CHECK(r.energy > floor);
            CHECK(alpha(cp, r.energy) > 1.0);
            CHECK(r.residual < 1e-10);
            const double a = alpha(cp, r.energy);
            CHECK(std::abs(std::sqrt(a * a - 1.0) * (r.n + 0.5) - lambda_value(cp, r.energy)) < 1e-10);
        }
        const auto all = s.energies();
        for (std::size_t i = 1; i < all.size(); ++i) CHECK(all[i] > all[i - 1]);
        // Each n against a brute-force scan in energy.
        for (int n = 0; n <= 5; ++n) {
            const auto brute = oracle::confluence_roots_brute(cp.omega, cp.delta, cp.g, n, +1, floor + 1e-9,
                                                              floor + 60.0, 600000);
            const auto mine = s.energies_for(n);
            REQUIRE(brute.size() == mine.size());
            for (std::size_t i = 0; i < mine.size(); ++i) CHECK(mine[i] == doctest::Approx(brute[i]).epsilon(1e-8));
        }
    }
}

TEST_CASE("lower bound states") {
    CHECK(lbs_energies({1.0, 0.7, 0.1}, 5).roots.empty());
    CHECK(lbs_energies({1.0, 0.7, 1.0}, 5).roots.empty());
    CHECK_FALSE(lbs_window_open({1.0, 0.7, 0.01}));

    const CriticalParams cp{1.0, 0.05, 0.3};
    CHECK(lbs_window_open(cp));
    const ConfluenceSpectrum s = lbs_energies(cp, 5, 1e-10);
    CHECK(s.failures.empty());
    REQUIRE_FALSE(s.roots.empty());
    const double e_thr = thresholds(cp).e_thr;
    for (const auto& r : s.roots) {
        CHECK(r.energy > cp.delta - cp.omega);
        CHECK(r.energy < e_thr);
        CHECK(alpha(cp, r.energy) < -1.0);
    }
    for (int n = 0; n <= 5; ++n) {
        const auto brute = oracle::confluence_roots_brute(cp.omega, cp.delta, cp.g, n, -1, cp.delta - cp.omega + 1e-12,
                                                          e_thr - 1e-12, 400000);
        const auto mine = s.energies_for(n);
        REQUIRE(brute.size() == mine.size());
        for (std::size_t i = 0; i < mine.size(); ++i) CHECK(mine[i] == doctest::Approx(brute[i]).epsilon(1e-8));
    }

    // Window g^2 < omega (omega/2 - delta) = 0.45.
    CHECK_FALSE(lbs_energies({1.0, 0.05, 0.67}, 0).roots.empty());
    CHECK(lbs_energies({1.0, 0.05, 0.671}, 0).roots.empty());
}

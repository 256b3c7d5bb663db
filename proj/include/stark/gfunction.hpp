// Spectral determinants G_±(x) of the Rabi-Stark model via the
// effective quantum Rabi model, their poles, and pole-aware root finding.
//
//   G_±(x) = sum_n K_n(x) (1 ∓ Δ̃/(x - n)) g̃^n
//   n K_n  = f_{n-1} K_{n-1} - K_{n-2},   K_{-1} = 0, K_0 = 1
//   f_n(x) = 2 g̃ + (n - x + Δ̃²/(x - n)) / (2 g̃)
//
// The recurrence is run on L_n = K_n g̃^n, which stays finite at g̃ = 0 and
// needs no division by g̃. Zeros of G_+ (G_-) are the regular eigenvalues of
// positive (negative) parity.

#pragma once

#include "stark/model.hpp"

#include <cstddef>
#include <vector>

namespace stark {

struct GSeriesSettings {
    std::size_t n_terms_max{200000};
    // A term counts as tail once |term| < tail_tolerance * max |term| seen so far
    // (the overall scale of K_n is arbitrary). Three consecutive tail terms past
    // n > max(x, 2 g̃²) stop the sum.
    double tail_tolerance{1e-16};
    // Minimum |x - n| in x units before evaluation is refused.
    double pole_guard{1e-6};

    void validate() const;
};

// G evaluated in sign / log-magnitude form; the K_n are rescaled on the fly.
struct GValue {
    int sign{0};                // -1, 0, +1
    double log_abs{0.0};        // log|G|, -inf when sign == 0
    std::size_t terms_used{0};

    // May overflow to ±inf for large log_abs.
    double value() const;
};

GValue g_value(const ModelParams& params, Parity parity, double energy,
               const GSeriesSettings& settings = {});

struct PoleSet {
    std::vector<double> energies;  // E_n with x(E_n) = n, ascending
    double spacing{0.0};           // (omega^2 - gamma^2) / omega
};

PoleSet pole_set(const ModelParams& params, int n_max);

// Regular spectrum of the given parity inside [e_lo, e_hi]: sign changes of G on
// a grid that avoids the poles, refined by bisection to
// |dE| < 1e-10 max(1, |E|). Each pole-to-pole interval gets scan_points samples
// clustered towards both poles; below the first pole the sample spacing is
// 1/scan_points in x units. Roots come back sorted and deduplicated.
// Exceptional (pole-coincident) eigenvalues are not zeros of G and are not found.
std::vector<double> find_roots(const ModelParams& params, Parity parity, double e_lo, double e_hi,
                               const GSeriesSettings& settings = {},
                               std::size_t scan_points_per_interval = 64);

// Lowest `count` roots of one parity, scanning upwards in windows from
// -delta - g^2 / (omega - gamma), a lower bound of the whole spectrum. Returns
// fewer roots only if max_windows windows are exhausted.
std::vector<double> lowest_roots(const ModelParams& params, Parity parity, std::size_t count,
                                 const GSeriesSettings& settings = {},
                                 std::size_t scan_points_per_interval = 64, std::size_t max_windows = 100000);

}  // namespace stark

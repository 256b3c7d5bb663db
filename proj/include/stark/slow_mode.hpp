// Adiabatic (slow field mode) potentials E_a(q), E_b(q), their
// harmonic spectra, the double-well onset and a finite-difference solver for the
// effective band Schrödinger equations. Mass m = 1.
//
//   E_{a,b}(q) = (omega^2/2) q^2 - omega/2
//                ± sqrt((delta - gamma/2 + (omega gamma/2) q^2)^2 + 2 omega g^2 q^2)
//
// All energies use the Hamiltonian convention, directly comparable with
// exact diagonalization.

#pragma once

#include "stark/confluence.hpp"
#include "stark/model.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace stark {

enum class Band { a, b };

std::string to_string(Band band);

struct BandPotential {
    Band band{Band::a};
    std::vector<double> q_grid;
    std::vector<double> values;
    // 1 + gamma/omega for band a, 1 - gamma/omega for band b.
    double effective_mass_divisor{1.0};
};

// Valid for gamma == omega as well.
double band_value(const ModelParams& params, Band band, double q);

// Uniform grid on [-q_half_width, q_half_width], n_points >= 2.
BandPotential sample_band(const ModelParams& params, Band band, double q_half_width, std::size_t n_points);

// Harmonic levels around q = 0 for n = 0..n_max, with delta' = delta - gamma/2,
// omega_± = omega ± gamma:
//   a: delta' + (n + 1/2) omega_+ sqrt(1 + 2 g^2 / (omega_+ delta')) - omega/2
//   b: -delta' + (n + 1/2) omega_- sqrt(1 - 2 g^2 / (omega_- delta')) - omega/2
// Throws DomainError when delta' <= 0 or a square-root argument is not positive.
std::vector<double> harmonic_band_levels(const ModelParams& params, Band band, int n_max);

// g* = sqrt(omega delta' (1 - gamma/omega) / 2); band b turns into a double well
// for g > g*. Throws DomainError when delta' <= 0 or gamma > omega.
double double_well_onset(const ModelParams& params);

// Lowest k_levels eigenvalues of -(1/2) d^2/dq^2 + E_band(q) / divisor on
// [-q_half_width, q_half_width] with Dirichlet walls and second-order central
// differences, scaled back by the divisor. n_points (odd, >= 101) counts the
// wall points. Throws BoundaryTooTight when E_band at either wall does not
// exceed the highest returned level, DomainError for band b at gamma >= omega.
std::vector<double> solve_band_schrodinger(const ModelParams& params, Band band, double q_half_width,
                                           std::size_t n_points, std::size_t k_levels);

// Large-|q| limit of E_b at gamma = omega: -delta - 2 g^2 / omega.
double band_asymptote(const CriticalParams& cp);

}  // namespace stark

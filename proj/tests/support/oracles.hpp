// Independent reference computations used only by the tests.

#pragma once

#include <cstddef>
#include <vector>

namespace oracle {

struct DenseSpectrum {
    std::vector<double> energies;  // ascending
    std::vector<double> parity;    // <(-1)^N sigma_z>
    std::vector<double> photon;    // <N>
};

// Full diagonalization of H assembled as Kronecker products in spin-major
// order (sigma ⊗ Fock), independent of the library's banded layout.
DenseSpectrum dense_spectrum(double omega, double gamma, double delta, double g, std::size_t n_trunc);

// Roots of the characteristic polynomial (l^2 - omega l - g^2)^2 of the
// two-photon, gamma = delta = 0 Hamiltonian.
std::vector<double> two_photon_roots(double omega, double g);

// x(E) in extended precision from the factored denominator.
double spectral_x(double omega, double gamma, double delta, double g, double energy);

// Lambda(E) term by term in extended precision.
double lambda_direct(double omega, double delta, double g, double energy);

// Strict interior local minima of a sampled function.
std::size_t count_interior_minima(const std::vector<double>& values);

// Spearman rank correlation (average ranks for ties).
double spearman(const std::vector<double>& x, const std::vector<double>& y);

// Roots of sqrt(alpha^2 - 1)(n + 1/2) - side * Lambda on (e_lo, e_hi), from a
// uniform energy grid with bisection; side = +1 for bound states in the
// continuum, -1 for the lower bound states.
std::vector<double> confluence_roots_brute(double omega, double delta, double g, int n, int side, double e_lo,
                                           double e_hi, std::size_t samples);

double median(std::vector<double> values);

}  // namespace oracle

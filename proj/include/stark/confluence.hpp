// Spectral analytics at the critical Stark coupling gamma = omega:
// the alpha / Lambda functions, energy-range classification, bound states in
// the continuum (BIC), lower bound states (LBS) and the continuum thresholds.

#pragma once

#include "stark/model.hpp"

#include <string>
#include <vector>

namespace stark {

// Parameters at gamma = omega.
struct CriticalParams {
    double omega{1.0};
    double delta{0.0};
    double g{0.0};

    // Throws DomainError unless omega > 0 and delta, g >= 0 (all finite).
    void validate() const;
    // Drops gamma (pinned to omega).
    static CriticalParams from(const ModelParams& params) { return {params.omega, params.delta, params.g}; }
};

enum class EnergyClass {
    discrete_upper,            // alpha > 1
    small_continuum,           // |alpha| < 1
    discrete_lower_window,     // alpha < -1 and E > delta - omega
    below_threshold,           // alpha < -1 and E <= delta - omega
    boundary_alpha_plus_one,   // |alpha - 1| <= tol
    boundary_alpha_minus_one,  // |alpha + 1| <= tol
};

std::string to_string(EnergyClass c);

// alpha(E) = 1 + omega (E + delta) / g^2. Throws DomainError at g = 0.
double alpha(const CriticalParams& cp, double energy);
// Lambda(E) = (E^2 - delta^2) / (2 g^2) + omega (E + delta) / (2 g^2). Throws DomainError at g = 0.
double lambda_value(const CriticalParams& cp, double energy);

EnergyClass classify_energy(const CriticalParams& cp, double energy, double tol = 1e-12);

struct Thresholds {
    double e_thr;                  // -delta - 2 g^2 / omega, alpha = -1
    double e_c;                    // -(delta + g^2 / omega), first pole as gamma -> omega
    double small_continuum_upper;  // -delta, alpha = +1
};

Thresholds thresholds(const CriticalParams& cp);

// omega (omega / 2 - delta) > g^2: the lower discrete spectrum exists.
bool lbs_window_open(const CriticalParams& cp);

struct ConfluenceRoot {
    int n{0};
    double energy{0.0};
    double residual{0.0};  // |sqrt(alpha^2 - 1)(n + 1/2) -+ Lambda| at the root
};

struct BracketFailure {
    int n{0};
    std::string reason;
};

struct ConfluenceSpectrum {
    std::vector<ConfluenceRoot> roots;  // ordered by n, then energy
    std::vector<BracketFailure> failures;

    // All root energies, ascending.
    std::vector<double> energies() const;
    // Roots for one n, ascending.
    std::vector<double> energies_for(int n) const;
};

// Roots of sqrt(alpha^2 - 1)(n + 1/2) = Lambda on (max(-delta, delta - omega), inf)
// for n = 0..n_max. The search samples 512 points uniformly in
// theta = acosh(alpha) and bisects every sign change until both the energy
// bracket and |residual| are below solver_tol. All roots per n are returned.
ConfluenceSpectrum bic_energies(const CriticalParams& cp, int n_max, double solver_tol = 1e-10);

// Roots of sqrt(alpha^2 - 1)(n + 1/2) = -Lambda on (delta - omega, E_thr);
// empty unless lbs_window_open(cp). Sampling uses theta = acosh(-alpha).
ConfluenceSpectrum lbs_energies(const CriticalParams& cp, int n_max, double solver_tol = 1e-10);

}  // namespace stark

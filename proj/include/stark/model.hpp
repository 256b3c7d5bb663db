// Rabi-Stark model parameters, g = 0 ladders and the map onto an
// effective quantum Rabi model.
//
// Hamiltonian (hbar = 1):
//   H = omega a^dag a + sigma_z (gamma a^dag a + delta) + g sigma_x (a^dag + a)
//
// All quantities are plain doubles in units where the caller picks omega
// (omega = 1 in every reproduced regime).

#pragma once

#include <vector>

namespace stark {

struct ModelParams {
    double omega{1.0};  // mode frequency, > 0
    double gamma{0.0};  // Stark coupling, >= 0 (gamma == omega is representable)
    double delta{0.0};  // qubit splitting, >= 0
    double g{0.0};      // Rabi coupling, >= 0

    // Throws DomainError unless omega > 0 and gamma, delta, g >= 0 (all finite).
    void validate() const;

    // gamma < omega; required by the renormalization map and the G-function.
    bool subcritical() const noexcept { return gamma < omega; }

    ModelParams with_g(double coupling) const {
        ModelParams p = *this;
        p.g = coupling;
        return p;
    }
};

// Eigenvalue of the parity operator P = (-1)^{a^dag a} sigma_z.
enum class Parity : int { positive = 1, negative = -1 };

inline int sign_of(Parity p) noexcept { return static_cast<int>(p); }
inline Parity opposite(Parity p) noexcept {
    return p == Parity::positive ? Parity::negative : Parity::positive;
}
// Parity from a (possibly approximate) expectation value; ties go to positive.
inline Parity parity_from(double expectation) noexcept {
    return expectation >= 0.0 ? Parity::positive : Parity::negative;
}

// Derived quantities of the effective quantum Rabi model obtained by the
// scale transformation phi_2 -> eta phi_2. Energy-dependent fields are member
// functions of E.
class RenormalizedView {
public:
    explicit RenormalizedView(const ModelParams& params);

    const ModelParams& params() const noexcept { return params_; }

    double eta() const noexcept { return eta_; }
    double g_tilde() const noexcept { return g_tilde_; }
    // sqrt(omega^2 - gamma^2), the gap scale of the first confluence.
    double epsilon() const noexcept { return epsilon_; }

    double e_tilde(double energy) const noexcept;
    double delta_tilde(double energy) const noexcept;
    // x(E) = (omega E + gamma delta + g^2) / (omega^2 - gamma^2)
    double x(double energy) const noexcept;
    // Inverse of the affine map x(E).
    double energy_at(double x_value) const noexcept;
    // dx/dE = omega / (omega^2 - gamma^2)
    double x_slope() const noexcept { return params_.omega / denom_; }

private:
    ModelParams params_;
    double denom_;  // omega^2 - gamma^2
    double eta_;
    double g_tilde_;
    double epsilon_;
};

// Throws DomainError when gamma >= omega (the scale transformation is singular).
RenormalizedView renormalize(const ModelParams& params);

struct BaselineLadders {
    std::vector<double> upper;  // (omega + gamma) n + delta, spin up
    std::vector<double> lower;  // (omega - gamma) n - delta, spin down
};

// g = 0 energies for n = 0..n_max, each list ascending. n_max < 0 gives empty lists.
BaselineLadders baseline_ladders(const ModelParams& params, int n_max);

// Couplings g_c^(n) = sqrt(n + delta/gamma) sqrt(omega^2 - gamma^2), n = 0..n_max,
// at which opposite-parity levels cross at E = -omega delta / gamma.
// Requires 0 < gamma < omega. n_max < 0 gives an empty list.
std::vector<double> crossing_couplings(const ModelParams& params, int n_max);

// -omega delta / gamma, the g-independent energy of the special crossing array.
// Requires gamma > 0.
double degenerate_energy(const ModelParams& params);

}  // namespace stark

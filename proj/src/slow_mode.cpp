#include "stark/slow_mode.hpp"

#include "stark/errors.hpp"
#include "stark/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stark {

std::string to_string(Band band) { return band == Band::a ? "a" : "b"; }

double band_value(const ModelParams& params, Band band, double q) {
    params.validate();
    const double w = params.omega;
    const double q2 = q * q;
    const double kinetic = 0.5 * w * w * q2;
    const double shifted = params.delta - 0.5 * params.gamma + 0.5 * w * params.gamma * q2;
    const double root = std::sqrt(shifted * shifted + 2.0 * w * params.g * params.g * q2);
    if (band == Band::a) return kinetic + root - 0.5 * w;
    // kinetic - root without cancellation: the numerator factorizes exactly, which
    // keeps the flat gamma = omega limit accurate at large q.
    const double denom = kinetic + root;
    if (denom == 0.0) return -0.5 * w;
    const double delta_prime = params.delta - 0.5 * params.gamma;
    const double diff = 0.5 * w * (w - params.gamma) * q2 - delta_prime;  // kinetic - shifted
    const double numer = diff * (kinetic + shifted) - 2.0 * w * params.g * params.g * q2;
    return numer / denom - 0.5 * w;
}

namespace {

double mass_divisor(const ModelParams& params, Band band) {
    const double r = params.gamma / params.omega;
    return band == Band::a ? 1.0 + r : 1.0 - r;
}

}  // namespace

BandPotential sample_band(const ModelParams& params, Band band, double q_half_width, std::size_t n_points) {
    if (n_points < 2) throw std::invalid_argument("sample_band: n_points must be >= 2");
    if (!(q_half_width > 0.0)) throw std::invalid_argument("sample_band: q_half_width must be > 0");
    BandPotential out;
    out.band = band;
    out.effective_mass_divisor = mass_divisor(params, band);
    out.q_grid.resize(n_points);
    out.values.resize(n_points);
    const double h = 2.0 * q_half_width / static_cast<double>(n_points - 1);
    for (std::size_t i = 0; i < n_points; ++i) {
        const double q = -q_half_width + h * static_cast<double>(i);
        out.q_grid[i] = q;
        out.values[i] = band_value(params, band, q);
    }
    return out;
}

std::vector<double> harmonic_band_levels(const ModelParams& params, Band band, int n_max) {
    params.validate();
    const double w = params.omega;
    const double dp = params.delta - 0.5 * params.gamma;
    if (!(dp > 0.0)) throw DomainError("harmonic_band_levels: requires delta - gamma/2 > 0");
    const double freq = band == Band::a ? w + params.gamma : w - params.gamma;
    if (!(freq > 0.0)) throw DomainError("harmonic_band_levels: band b requires gamma < omega");
    const double sign = band == Band::a ? 1.0 : -1.0;
    const double arg = 1.0 + sign * 2.0 * params.g * params.g / (freq * dp);
    if (!(arg > 0.0)) throw DomainError("harmonic_band_levels: band b frequency is not real (g beyond onset)");
    const double quantum = freq * std::sqrt(arg);
    std::vector<double> out;
    for (int n = 0; n <= n_max; ++n) out.push_back(sign * dp + (n + 0.5) * quantum - 0.5 * w);
    return out;
}

double double_well_onset(const ModelParams& params) {
    params.validate();
    const double dp = params.delta - 0.5 * params.gamma;
    if (!(dp > 0.0)) throw DomainError("double_well_onset: requires delta - gamma/2 > 0");
    if (params.gamma > params.omega) throw DomainError("double_well_onset: requires gamma <= omega");
    return std::sqrt(params.omega * dp * (1.0 - params.gamma / params.omega) / 2.0);
}

std::vector<double> solve_band_schrodinger(const ModelParams& params, Band band, double q_half_width,
                                           std::size_t n_points, std::size_t k_levels) {
    params.validate();
    if (n_points < 101 || n_points % 2 == 0) {
        throw std::invalid_argument("solve_band_schrodinger: n_points must be odd and >= 101");
    }
    if (!(q_half_width > 0.0)) throw std::invalid_argument("solve_band_schrodinger: q_half_width must be > 0");
    const std::size_t interior = n_points - 2;
    if (k_levels < 1 || k_levels > interior) {
        throw std::invalid_argument("solve_band_schrodinger: k_levels out of range");
    }
    if (band == Band::b && !(params.gamma < params.omega)) {
        throw DomainError("solve_band_schrodinger: band b requires gamma < omega");
    }
    const double divisor = mass_divisor(params, band);
    const double h = 2.0 * q_half_width / static_cast<double>(n_points - 1);

    Eigen::VectorXd diag(static_cast<Eigen::Index>(interior));
    Eigen::VectorXd off = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(interior - 1), -0.5 / (h * h));
    for (std::size_t i = 0; i < interior; ++i) {
        const double q = -q_half_width + h * static_cast<double>(i + 1);
        diag(static_cast<Eigen::Index>(i)) = 1.0 / (h * h) + band_value(params, band, q) / divisor;
    }
    const TridiagonalEigen te = lowest_tridiagonal_eigenpairs(diag, off, k_levels, false);
    std::vector<double> out(static_cast<std::size_t>(te.values.size()));
    for (Eigen::Index i = 0; i < te.values.size(); ++i) out[static_cast<std::size_t>(i)] = divisor * te.values(i);

    const double wall = std::min(band_value(params, band, -q_half_width), band_value(params, band, q_half_width));
    if (!(wall > out.back())) {
        throw BoundaryTooTight("solve_band_schrodinger: band value at the wall (" + std::to_string(wall) +
                               ") does not exceed level " + std::to_string(k_levels - 1) + " (" +
                               std::to_string(out.back()) + ")");
    }
    return out;
}

double band_asymptote(const CriticalParams& cp) { return thresholds(cp).e_thr; }

}  // namespace stark

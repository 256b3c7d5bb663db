#include "stark/confluence.hpp"

#include "stark/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace stark {

void CriticalParams::validate() const {
    if (!std::isfinite(omega) || !(omega > 0.0)) throw DomainError("CriticalParams: omega must be > 0");
    if (!std::isfinite(delta) || delta < 0.0) throw DomainError("CriticalParams: delta must be >= 0");
    if (!std::isfinite(g) || g < 0.0) throw DomainError("CriticalParams: g must be >= 0");
}

std::string to_string(EnergyClass c) {
    switch (c) {
        case EnergyClass::discrete_upper: return "DiscreteUpper";
        case EnergyClass::small_continuum: return "SmallContinuum";
        case EnergyClass::discrete_lower_window: return "DiscreteLowerWindow";
        case EnergyClass::below_threshold: return "BelowThreshold";
        case EnergyClass::boundary_alpha_plus_one: return "BoundaryAlphaPlusOne";
        case EnergyClass::boundary_alpha_minus_one: return "BoundaryAlphaMinusOne";
    }
    return "Unknown";
}

namespace {

void require_coupling(const CriticalParams& cp, const char* who) {
    cp.validate();
    if (!(cp.g > 0.0)) throw DomainError(std::string(who) + ": undefined at g = 0");
}

}  // namespace

double alpha(const CriticalParams& cp, double energy) {
    require_coupling(cp, "alpha");
    return 1.0 + cp.omega * (energy + cp.delta) / (cp.g * cp.g);
}

double lambda_value(const CriticalParams& cp, double energy) {
    require_coupling(cp, "lambda_value");
    const double g2 = 2.0 * cp.g * cp.g;
    return (energy * energy - cp.delta * cp.delta) / g2 + cp.omega * (energy + cp.delta) / g2;
}

EnergyClass classify_energy(const CriticalParams& cp, double energy, double tol) {
    const double a = alpha(cp, energy);
    if (std::abs(a - 1.0) <= tol) return EnergyClass::boundary_alpha_plus_one;
    if (std::abs(a + 1.0) <= tol) return EnergyClass::boundary_alpha_minus_one;
    if (a > 1.0) return EnergyClass::discrete_upper;
    if (a > -1.0) return EnergyClass::small_continuum;
    return energy > cp.delta - cp.omega ? EnergyClass::discrete_lower_window : EnergyClass::below_threshold;
}

Thresholds thresholds(const CriticalParams& cp) {
    cp.validate();
    const double s = cp.g * cp.g / cp.omega;
    return {-cp.delta - 2.0 * s, -(cp.delta + s), -cp.delta};
}

bool lbs_window_open(const CriticalParams& cp) {
    cp.validate();
    return cp.omega * (0.5 * cp.omega - cp.delta) > cp.g * cp.g;
}

std::vector<double> ConfluenceSpectrum::energies() const {
    std::vector<double> out;
    for (const auto& r : roots) out.push_back(r.energy);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> ConfluenceSpectrum::energies_for(int n) const {
    std::vector<double> out;
    for (const auto& r : roots) {
        if (r.n == n) out.push_back(r.energy);
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

constexpr std::size_t kSamples = 512;
constexpr int kMaxBisections = 200;

// One branch of the eigenvalue condition parametrized by theta >= 0:
// E(theta) and the residual F(theta).
struct Branch {
    std::function<double(double)> energy;
    std::function<double(double, int)> residual;
};

void search(const Branch& branch, double theta_lo, double theta_hi, int n, double tol,
            ConfluenceSpectrum& out) {
    std::vector<double> theta(kSamples);
    std::vector<double> f(kSamples);
    for (std::size_t i = 0; i < kSamples; ++i) {
        theta[i] = theta_lo + (theta_hi - theta_lo) * static_cast<double>(i) / static_cast<double>(kSamples - 1);
        f[i] = branch.residual(theta[i], n);
    }
    bool found = false;
    bool stalled = false;
    for (std::size_t i = 0; i + 1 < kSamples; ++i) {
        double a = theta[i];
        double b = theta[i + 1];
        double fa = f[i];
        const double fb = f[i + 1];
        if (fa == 0.0) {
            out.roots.push_back({n, branch.energy(a), 0.0});
            found = true;
            continue;
        }
        if (fa * fb > 0.0 || fb == 0.0) continue;
        double mid = 0.5 * (a + b);
        double fm = branch.residual(mid, n);
        bool ok = false;
        for (int it = 0; it < kMaxBisections; ++it) {
            mid = 0.5 * (a + b);
            fm = branch.residual(mid, n);
            const double width = std::abs(branch.energy(b) - branch.energy(a));
            if (width < tol && std::abs(fm) < tol) {
                ok = true;
                break;
            }
            if (fm == 0.0) {
                ok = std::abs(fm) < tol;
                break;
            }
            if ((fa < 0.0) == (fm < 0.0)) {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
        }
        if (ok) {
            out.roots.push_back({n, branch.energy(mid), std::abs(fm)});
            found = true;
        } else {
            out.failures.push_back({n, "bisection stalled with residual " + std::to_string(std::abs(fm))});
            stalled = true;
        }
    }
    if (!found && !stalled) out.failures.push_back({n, "no sign change in the search interval"});
}

void validate_request(const CriticalParams& cp, int n_max, double tol, const char* who) {
    require_coupling(cp, who);
    if (!(tol > 0.0)) throw std::invalid_argument(std::string(who) + ": solver_tol must be > 0");
    if (n_max < 0) throw std::invalid_argument(std::string(who) + ": n_max must be >= 0");
}

}  // namespace

ConfluenceSpectrum bic_energies(const CriticalParams& cp, int n_max, double solver_tol) {
    validate_request(cp, n_max, solver_tol, "bic_energies");
    const double w = cp.omega;
    const double d = cp.delta;
    const double scale = cp.g * cp.g / w;

    // alpha = cosh(theta) > 1
    Branch branch{
        [=](double t) { return -d + scale * (std::cosh(t) - 1.0); },
        [=](double t, int n) {
            const double e = -d + scale * (std::cosh(t) - 1.0);
            return std::sinh(t) * (n + 0.5) - lambda_value(cp, e);
        },
    };

    ConfluenceSpectrum out;
    const double e_floor = std::max(-d, d - w);
    for (int n = 0; n <= n_max; ++n) {
        // Past this energy sqrt(alpha^2 - 1)(n + 1/2) < alpha (n + 1/2) < Lambda.
        const double nw = n * w;
        const double e_cap = nw + std::sqrt(nw * nw + d * d + 2.0 * nw * d + (2 * n + 1) * cp.g * cp.g);
        const double e_hi = 1.1 * e_cap + 1.0;
        const double theta_hi = std::acosh(alpha(cp, e_hi));
        double theta_lo = 1e-8 * theta_hi;
        if (e_floor > -d) theta_lo = std::max(theta_lo, std::acosh(alpha(cp, e_floor)));
        search(branch, theta_lo, theta_hi, n, solver_tol, out);
    }
    std::erase_if(out.roots, [&](const ConfluenceRoot& r) { return !(r.energy > e_floor); });
    return out;
}

ConfluenceSpectrum lbs_energies(const CriticalParams& cp, int n_max, double solver_tol) {
    validate_request(cp, n_max, solver_tol, "lbs_energies");
    ConfluenceSpectrum out;
    if (!lbs_window_open(cp)) return out;
    const double w = cp.omega;
    const double d = cp.delta;
    const double scale = cp.g * cp.g / w;

    // alpha = -cosh(theta) < -1
    Branch branch{
        [=](double t) { return -d - scale * (1.0 + std::cosh(t)); },
        [=](double t, int n) {
            const double e = -d - scale * (1.0 + std::cosh(t));
            return std::sinh(t) * (n + 0.5) + lambda_value(cp, e);
        },
    };

    const double theta_hi = std::acosh(-alpha(cp, d - w));
    const double theta_lo = 1e-8 * theta_hi;
    for (int n = 0; n <= n_max; ++n) search(branch, theta_lo, theta_hi, n, solver_tol, out);
    const double e_thr = thresholds(cp).e_thr;
    std::erase_if(out.roots, [&](const ConfluenceRoot& r) { return !(r.energy > d - w && r.energy < e_thr); });
    return out;
}

}  // namespace stark

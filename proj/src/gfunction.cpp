#include "stark/gfunction.hpp"

#include "stark/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

namespace stark {

void GSeriesSettings::validate() const {
    if (n_terms_max < 8) throw DomainError("GSeriesSettings: n_terms_max must be >= 8");
    if (!(tail_tolerance > 0.0)) throw DomainError("GSeriesSettings: tail_tolerance must be > 0");
    if (!(pole_guard > 0.0)) throw DomainError("GSeriesSettings: pole_guard must be > 0");
}

double GValue::value() const {
    if (sign == 0) return 0.0;
    return sign * std::exp(log_abs);
}

namespace {

constexpr std::size_t kRescaleEvery = 32;
constexpr double kRescaleHard = 1e150;
constexpr int kTailRun = 3;

// Divides every tracked quantity by a power of two so the rescale is exact.
struct ScaledSeries {
    double l_prev2{0.0};
    double l_prev1{1.0};
    double sum{0.0};
    double max_term{0.0};
    double log_scale{0.0};

    void rescale() {
        const double peak =
            std::max({std::abs(l_prev1), std::abs(l_prev2), std::abs(sum), max_term});
        if (peak == 0.0 || !std::isfinite(peak)) return;
        int exponent = 0;
        std::frexp(peak, &exponent);
        l_prev1 = std::ldexp(l_prev1, -exponent);
        l_prev2 = std::ldexp(l_prev2, -exponent);
        sum = std::ldexp(sum, -exponent);
        max_term = std::ldexp(max_term, -exponent);
        log_scale += exponent * std::numbers::ln2;
    }
};

void check_pole_distance(double x, const GSeriesSettings& settings) {
    const double nearest = std::round(x);
    if (nearest < 0.0 || nearest > static_cast<double>(settings.n_terms_max)) return;
    if (std::abs(x - nearest) <= settings.pole_guard) {
        throw PoleProximity("g_value: x=" + std::to_string(x) + " within pole_guard of pole n=" +
                                std::to_string(static_cast<long>(nearest)),
                            x, static_cast<long>(nearest));
    }
}

}  // namespace

GValue g_value(const ModelParams& params, Parity parity, double energy,
               const GSeriesSettings& settings) {
    settings.validate();
    const RenormalizedView view = renormalize(params);
    const double x = view.x(energy);
    check_pole_distance(x, settings);

    const double dt = view.delta_tilde(energy);
    const double dt2 = dt * dt;
    const double gt2 = view.g_tilde() * view.g_tilde();
    // G_+ carries (1 - Δ̃/(x-n)), G_- carries (1 + Δ̃/(x-n)).
    const double s = static_cast<double>(sign_of(parity));
    const double tail_start = std::max(x, 2.0 * gt2);

    ScaledSeries series;
    series.sum = 1.0 - s * dt / x;
    series.max_term = std::max(std::abs(series.sum), 1.0);

    int tail_run = 0;
    std::size_t n = 1;
    bool converged = false;
    double last_term = series.sum;
    for (; n <= settings.n_terms_max; ++n) {
        const double nm1 = static_cast<double>(n - 1);
        const double f_times_g = 2.0 * gt2 + 0.5 * (nm1 - x + dt2 / (x - nm1));
        const double l = (f_times_g * series.l_prev1 - gt2 * series.l_prev2) / static_cast<double>(n);
        const double term = l * (1.0 - s * dt / (x - static_cast<double>(n)));
        series.sum += term;
        series.max_term = std::max(series.max_term, std::abs(term));
        last_term = term;

        if (static_cast<double>(n) > tail_start &&
            std::abs(term) < settings.tail_tolerance * series.max_term) {
            if (++tail_run >= kTailRun) {
                converged = true;
                break;
            }
        } else {
            tail_run = 0;
        }

        series.l_prev2 = series.l_prev1;
        series.l_prev1 = l;
        if (n % kRescaleEvery == 0 || std::abs(l) > kRescaleHard) series.rescale();
    }

    if (!converged) {
        const double rel = series.max_term > 0.0 ? std::abs(last_term) / series.max_term : 0.0;
        throw NonConvergence("g_value: series tail criterion not met within n_terms_max=" +
                                 std::to_string(settings.n_terms_max) + " (x=" + std::to_string(x) +
                                 ", g_tilde^2=" + std::to_string(gt2) + ")",
                             settings.n_terms_max, rel);
    }

    GValue out;
    out.terms_used = std::min(n, settings.n_terms_max) + 1;
    if (series.sum == 0.0) {
        out.sign = 0;
        out.log_abs = -std::numeric_limits<double>::infinity();
    } else {
        out.sign = series.sum > 0.0 ? 1 : -1;
        out.log_abs = std::log(std::abs(series.sum)) + series.log_scale;
    }
    return out;
}

PoleSet pole_set(const ModelParams& params, int n_max) {
    const RenormalizedView view = renormalize(params);
    PoleSet out;
    out.spacing = (params.omega - params.gamma) * (params.omega + params.gamma) / params.omega;
    if (n_max < 0) return out;
    out.energies.reserve(static_cast<std::size_t>(n_max) + 1);
    const double e0 = view.energy_at(0.0);
    for (int n = 0; n <= n_max; ++n) out.energies.push_back(e0 + n * out.spacing);
    return out;
}

namespace {

struct Segment {
    double x_lo;
    double x_hi;
};

// Pole-free pieces of [x_lo, x_hi], each kept 2*pole_guard away from integer poles.
std::vector<Segment> pole_free_segments(double x_lo, double x_hi, const GSeriesSettings& settings) {
    const double margin = 2.0 * settings.pole_guard;
    std::vector<Segment> out;
    double start = x_lo;
    const double first = std::max(0.0, std::ceil(x_lo - margin));
    const double last = std::min(std::floor(x_hi + margin), static_cast<double>(settings.n_terms_max));
    for (double m = first; m <= last; m += 1.0) {
        const double stop = std::min(x_hi, m - margin);
        if (stop > start) out.push_back({start, stop});
        start = std::max(start, m + margin);
    }
    if (x_hi > start) out.push_back({start, x_hi});
    return out;
}

std::optional<int> sign_at(const ModelParams& params, Parity parity, double energy,
                           const GSeriesSettings& settings) {
    try {
        return g_value(params, parity, energy, settings).sign;
    } catch (const PoleProximity&) {
        return std::nullopt;
    }
}

double bisect(const ModelParams& params, Parity parity, double e_left, int s_left, double e_right,
              const GSeriesSettings& settings) {
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (e_left + e_right);
        if (e_right - e_left < 1e-10 * std::max(1.0, std::abs(mid))) return mid;
        const auto s_mid = sign_at(params, parity, mid, settings);
        if (!s_mid) return mid;
        if (*s_mid == 0) return mid;
        if (*s_mid == s_left) {
            e_left = mid;
        } else {
            e_right = mid;
        }
    }
    return 0.5 * (e_left + e_right);
}

}  // namespace

std::vector<double> find_roots(const ModelParams& params, Parity parity, double e_lo, double e_hi,
                               const GSeriesSettings& settings,
                               std::size_t scan_points_per_interval) {
    settings.validate();
    if (e_lo > e_hi) throw std::invalid_argument("find_roots: e_lo must not exceed e_hi");
    if (e_lo == e_hi) return {};
    if (scan_points_per_interval < 2) {
        throw std::invalid_argument("find_roots: scan_points_per_interval must be >= 2");
    }
    const RenormalizedView view = renormalize(params);

    std::vector<double> roots;
    for (const Segment& seg : pole_free_segments(view.x(e_lo), view.x(e_hi), settings)) {
        const double width = seg.x_hi - seg.x_lo;
        const auto nodes = static_cast<std::size_t>(
            static_cast<double>(scan_points_per_interval) * std::max(1.0, std::ceil(width)));

        double prev_e = 0.0;
        int prev_sign = 0;  // 0: no usable previous sample
        for (std::size_t k = 0; k <= nodes; ++k) {
            // Chebyshev-Lobatto spacing: dense next to the poles at both ends.
            const double t = 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(k) /
                                                   static_cast<double>(nodes)));
            const double energy = view.energy_at(seg.x_lo + t * width);
            const auto s = sign_at(params, parity, energy, settings);
            if (!s) continue;
            if (*s == 0) {
                roots.push_back(energy);
                prev_sign = 0;
                continue;
            }
            if (prev_sign != 0 && *s != prev_sign) {
                roots.push_back(bisect(params, parity, prev_e, prev_sign, energy, settings));
            }
            prev_e = energy;
            prev_sign = *s;
        }
    }

    std::sort(roots.begin(), roots.end());
    std::vector<double> unique;
    for (double r : roots) {
        if (unique.empty() || r - unique.back() > 1e-9 * std::max(1.0, std::abs(r))) {
            unique.push_back(r);
        }
    }
    return unique;
}

std::vector<double> lowest_roots(const ModelParams& params, Parity parity, std::size_t count,
                                 const GSeriesSettings& settings, std::size_t scan_points_per_interval,
                                 std::size_t max_windows) {
    const double spacing = pole_set(params, 0).spacing;
    const double step = std::max(1.0, 10.0 * spacing);
    double lo = -params.delta - params.g * params.g / (params.omega - params.gamma) - 0.5;
    std::vector<double> roots;
    for (std::size_t w = 0; w < max_windows && roots.size() < count; ++w) {
        for (double r : find_roots(params, parity, lo, lo + step, settings, scan_points_per_interval)) {
            if (roots.empty() || r - roots.back() > 1e-9 * std::max(1.0, std::abs(r))) roots.push_back(r);
        }
        lo += step;
    }
    if (roots.size() > count) roots.resize(count);
    return roots;
}

}  // namespace stark

#include "stark/model.hpp"

#include "stark/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace stark {

void ModelParams::validate() const {
    if (!std::isfinite(omega) || !std::isfinite(gamma) || !std::isfinite(delta) ||
        !std::isfinite(g)) {
        throw DomainError("ModelParams: all parameters must be finite");
    }
    if (omega <= 0.0) throw DomainError("ModelParams: omega must be > 0");
    if (gamma < 0.0) throw DomainError("ModelParams: gamma must be >= 0");
    if (delta < 0.0) throw DomainError("ModelParams: delta must be >= 0");
    if (g < 0.0) throw DomainError("ModelParams: g must be >= 0");
}

RenormalizedView::RenormalizedView(const ModelParams& params) : params_(params) {
    params_.validate();
    if (!params_.subcritical()) {
        throw DomainError("renormalize: scale transformation is singular for gamma >= omega (gamma=" +
                          std::to_string(params_.gamma) + ", omega=" + std::to_string(params_.omega) +
                          ")");
    }
    const double w = params_.omega;
    const double gm = params_.gamma;
    denom_ = (w - gm) * (w + gm);
    eta_ = (w + gm) / (w - gm);
    epsilon_ = std::sqrt(denom_);
    g_tilde_ = params_.g / epsilon_;
}

double RenormalizedView::e_tilde(double energy) const noexcept {
    return (params_.omega * energy + params_.gamma * params_.delta) / denom_;
}

double RenormalizedView::delta_tilde(double energy) const noexcept {
    return (params_.omega * params_.delta + params_.gamma * energy) / denom_;
}

double RenormalizedView::x(double energy) const noexcept {
    const auto& p = params_;
    return (p.omega * energy + p.gamma * p.delta + p.g * p.g) / denom_;
}

double RenormalizedView::energy_at(double x_value) const noexcept {
    const auto& p = params_;
    return (x_value * denom_ - p.gamma * p.delta - p.g * p.g) / p.omega;
}

RenormalizedView renormalize(const ModelParams& params) { return RenormalizedView(params); }

BaselineLadders baseline_ladders(const ModelParams& params, int n_max) {
    params.validate();
    BaselineLadders out;
    if (n_max < 0) return out;
    const auto count = static_cast<std::size_t>(n_max) + 1;
    out.upper.reserve(count);
    out.lower.reserve(count);
    for (int n = 0; n <= n_max; ++n) {
        out.upper.push_back((params.omega + params.gamma) * n + params.delta);
        out.lower.push_back((params.omega - params.gamma) * n - params.delta);
    }
    // Lower ladder descends in n when gamma > omega.
    std::sort(out.lower.begin(), out.lower.end());
    return out;
}

std::vector<double> crossing_couplings(const ModelParams& params, int n_max) {
    params.validate();
    if (params.gamma <= 0.0) {
        throw DomainError("crossing_couplings: gamma must be > 0 (all g_c^(n) diverge as gamma -> 0)");
    }
    if (!params.subcritical()) {
        throw DomainError("crossing_couplings: requires gamma < omega");
    }
    std::vector<double> out;
    if (n_max < 0) return out;
    const double scale = std::sqrt((params.omega - params.gamma) * (params.omega + params.gamma));
    const double offset = params.delta / params.gamma;
    out.reserve(static_cast<std::size_t>(n_max) + 1);
    for (int n = 0; n <= n_max; ++n) out.push_back(std::sqrt(n + offset) * scale);
    return out;
}

double degenerate_energy(const ModelParams& params) {
    params.validate();
    if (params.gamma <= 0.0) throw DomainError("degenerate_energy: gamma must be > 0");
    return -params.omega * params.delta / params.gamma;
}

}  // namespace stark

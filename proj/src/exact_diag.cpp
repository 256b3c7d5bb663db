#include "stark/exact_diag.hpp"

#include "stark/errors.hpp"
#include "stark/parallel.hpp"
#include "stark/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace stark {

TruncatedHamiltonian::TruncatedHamiltonian(const ModelParams& params, std::size_t n_trunc)
    : params_(params), n_trunc_(n_trunc) {
    params_.validate();
    if (n_trunc < 2) throw std::invalid_argument("build_hamiltonian: n_trunc must be >= 2");
    const std::size_t dim = 2 * n_trunc;
    diag_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
    band1_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim - 1));
    band3_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim - 3));

    const double w = params_.omega;
    const double gm = params_.gamma;
    const double dl = params_.delta;
    for (std::size_t n = 0; n < n_trunc; ++n) {
        const double nd = static_cast<double>(n);
        const auto up = static_cast<Eigen::Index>(index(n, true));
        const auto down = static_cast<Eigen::Index>(index(n, false));
        diag_(up) = w * nd + (gm * nd + dl);
        diag_(down) = w * nd - (gm * nd + dl);
        if (n + 1 < n_trunc) {
            const double c = params_.g * std::sqrt(nd + 1.0);
            band1_(down) = c;  // |n,down> <-> |n+1,up>
            band3_(up) = c;    // |n,up>   <-> |n+1,down>
        }
    }
}

double TruncatedHamiltonian::entry(std::size_t i, std::size_t j) const {
    if (i >= dimension() || j >= dimension()) throw std::out_of_range("TruncatedHamiltonian::entry");
    const std::size_t lo = std::min(i, j);
    switch (std::max(i, j) - lo) {
        case 0: return diag_(static_cast<Eigen::Index>(lo));
        case 1: return band1_(static_cast<Eigen::Index>(lo));
        case 3: return band3_(static_cast<Eigen::Index>(lo));
        default: return 0.0;
    }
}

Eigen::MatrixXd TruncatedHamiltonian::to_dense() const {
    const auto dim = static_cast<Eigen::Index>(dimension());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    m.diagonal() = diag_;
    for (Eigen::Index i = 0; i < band1_.size(); ++i) m(i, i + 1) = m(i + 1, i) = band1_(i);
    for (Eigen::Index i = 0; i < band3_.size(); ++i) m(i, i + 3) = m(i + 3, i) = band3_(i);
    return m;
}

Eigen::VectorXd TruncatedHamiltonian::apply(const Eigen::VectorXd& v) const {
    if (v.size() != diag_.size()) throw std::invalid_argument("TruncatedHamiltonian::apply: size mismatch");
    Eigen::VectorXd y = diag_.cwiseProduct(v);
    for (Eigen::Index i = 0; i < band1_.size(); ++i) {
        y(i) += band1_(i) * v(i + 1);
        y(i + 1) += band1_(i) * v(i);
    }
    for (Eigen::Index i = 0; i < band3_.size(); ++i) {
        y(i) += band3_(i) * v(i + 3);
        y(i + 3) += band3_(i) * v(i);
    }
    return y;
}

double TruncatedHamiltonian::norm_bound() const {
    Eigen::VectorXd rows = diag_.cwiseAbs();
    for (Eigen::Index i = 0; i < band1_.size(); ++i) {
        rows(i) += std::abs(band1_(i));
        rows(i + 1) += std::abs(band1_(i));
    }
    for (Eigen::Index i = 0; i < band3_.size(); ++i) {
        rows(i) += std::abs(band3_(i));
        rows(i + 3) += std::abs(band3_(i));
    }
    return rows.maxCoeff();
}

std::size_t TruncatedHamiltonian::chain_index(Parity parity, std::size_t n) noexcept {
    const bool even = (n % 2) == 0;
    const bool spin_up = (parity == Parity::positive) == even;
    return index(n, spin_up);
}

void TruncatedHamiltonian::parity_chain(Parity parity, Eigen::VectorXd& diagonal,
                                        Eigen::VectorXd& off_diagonal) const {
    const auto n = static_cast<Eigen::Index>(n_trunc_);
    diagonal.resize(n);
    off_diagonal.resize(n - 1);
    for (std::size_t k = 0; k < n_trunc_; ++k) {
        diagonal(static_cast<Eigen::Index>(k)) = entry(chain_index(parity, k), chain_index(parity, k));
        if (k + 1 < n_trunc_) {
            off_diagonal(static_cast<Eigen::Index>(k)) =
                entry(chain_index(parity, k), chain_index(parity, k + 1));
        }
    }
}

TruncatedHamiltonian build_hamiltonian(const ModelParams& params, std::size_t n_trunc) {
    return TruncatedHamiltonian(params, n_trunc);
}

std::string to_string(SolverKind kind) {
    switch (kind) {
        case SolverKind::parity_blocks: return "parity_blocks";
        case SolverKind::dense: return "dense";
    }
    return "unknown";
}

std::vector<double> EigenSolution::energies_of(Parity p) const {
    std::vector<double> out;
    for (std::size_t i = 0; i < energies.size(); ++i) {
        if (parity(i) == p) out.push_back(energies[i]);
    }
    return out;
}

namespace {

struct Eigenpair {
    double energy;
    double parity;
    double photon;
    double residual;
};

Eigenpair observe(const TruncatedHamiltonian& h, double energy, const Eigen::VectorXd& v) {
    double parity = 0.0;
    double photon = 0.0;
    for (std::size_t n = 0; n < h.n_trunc(); ++n) {
        const double up = v(static_cast<Eigen::Index>(TruncatedHamiltonian::index(n, true)));
        const double down = v(static_cast<Eigen::Index>(TruncatedHamiltonian::index(n, false)));
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        parity += sign * (up * up - down * down);
        photon += static_cast<double>(n) * (up * up + down * down);
    }
    const double residual = (h.apply(v) - energy * v).norm();
    return {energy, parity, photon, residual};
}

std::vector<Eigenpair> solve_parity_blocks(const TruncatedHamiltonian& h, std::size_t k_levels,
                                           std::optional<Parity> only) {
    std::vector<Eigenpair> pairs;
    for (Parity p : {Parity::positive, Parity::negative}) {
        if (only && *only != p) continue;
        Eigen::VectorXd d;
        Eigen::VectorXd e;
        h.parity_chain(p, d, e);
        const TridiagonalEigen te = lowest_tridiagonal_eigenpairs(d, e, k_levels);
        Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(h.dimension()));
        for (Eigen::Index j = 0; j < te.values.size(); ++j) {
            full.setZero();
            for (std::size_t n = 0; n < h.n_trunc(); ++n) {
                full(static_cast<Eigen::Index>(TruncatedHamiltonian::chain_index(p, n))) =
                    te.vectors(static_cast<Eigen::Index>(n), j);
            }
            pairs.push_back(observe(h, te.values(j), full));
        }
    }
    return pairs;
}

std::vector<Eigenpair> solve_dense(const TruncatedHamiltonian& h, std::size_t k_levels,
                                   std::optional<Parity> only) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.to_dense());
    if (solver.info() != Eigen::Success) {
        throw NonConvergence("diagonalize: dense eigen decomposition failed", h.dimension(), 0.0);
    }
    std::vector<Eigenpair> pairs;
    for (Eigen::Index j = 0; j < solver.eigenvalues().size() && pairs.size() < k_levels; ++j) {
        const Eigenpair ep = observe(h, solver.eigenvalues()(j), solver.eigenvectors().col(j));
        if (only && parity_from(ep.parity) != *only) continue;
        pairs.push_back(ep);
    }
    return pairs;
}

}  // namespace

EigenSolution diagonalize(const TruncatedHamiltonian& h, std::size_t k_levels,
                          const DiagonalizeOptions& options) {
    const std::size_t limit = options.parity ? h.n_trunc() : h.dimension();
    if (k_levels < 1 || k_levels > limit) {
        throw std::invalid_argument("diagonalize: k_levels must lie in [1, " + std::to_string(limit) + "]");
    }

    std::vector<Eigenpair> pairs = options.solver == SolverKind::dense
                                       ? solve_dense(h, k_levels, options.parity)
                                       : solve_parity_blocks(h, k_levels, options.parity);
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const Eigenpair& a, const Eigenpair& b) { return a.energy < b.energy; });
    if (pairs.size() > k_levels) pairs.resize(k_levels);

    EigenSolution out;
    out.n_trunc = h.n_trunc();
    out.solver = options.solver;
    const double bound = 1e-9 * std::max(1.0, h.norm_bound());
    for (const Eigenpair& ep : pairs) {
        out.energies.push_back(ep.energy);
        out.parity_expectation.push_back(ep.parity);
        out.photon_content.push_back(ep.photon);
        out.max_residual = std::max(out.max_residual, ep.residual);
    }
    if (out.max_residual > bound) {
        throw NonConvergence("diagonalize: eigenpair residual " + std::to_string(out.max_residual) +
                                 " exceeds 1e-9 ||H||",
                             h.dimension(), out.max_residual);
    }
    return out;
}

namespace {

bool energies_agree(const EigenSolution& a, const EigenSolution& b, double rel_tol) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double scale = std::max(1.0, std::abs(b.energies[i]));
        if (std::abs(a.energies[i] - b.energies[i]) >= rel_tol * scale) return false;
    }
    return true;
}

}  // namespace

EigenSolution converged_spectrum(const ModelParams& params, std::size_t k_levels, double rel_tol,
                                 std::size_t n_start, std::size_t n_cap,
                                 const DiagonalizeOptions& options) {
    if (n_start < k_levels) throw std::invalid_argument("converged_spectrum: n_start must be >= k_levels");
    if (n_start < 2) throw std::invalid_argument("converged_spectrum: n_start must be >= 2");
    if (!(rel_tol > 0.0)) throw std::invalid_argument("converged_spectrum: rel_tol must be > 0");
    n_cap = std::max(n_cap, n_start);

    std::size_t n = n_start;
    EigenSolution prev = diagonalize(build_hamiltonian(params, n), k_levels, options);
    while (n < n_cap) {
        const std::size_t next = std::min(n_cap, std::max(n + 1, (3 * n + 1) / 2));
        EigenSolution cur = diagonalize(build_hamiltonian(params, next), k_levels, options);
        if (energies_agree(prev, cur, rel_tol)) {
            prev.converged = true;
            prev.verified_n_trunc = next;
            return prev;
        }
        prev = std::move(cur);
        n = next;
    }
    prev.converged = false;
    prev.verified_n_trunc = 0;
    return prev;
}

SpectralGraph sweep(const ModelParams& params_base, const std::vector<double>& g_grid,
                    std::size_t k_levels, std::optional<Parity> parity_filter,
                    const SweepOptions& options) {
    if (!std::is_sorted(g_grid.begin(), g_grid.end())) {
        throw std::invalid_argument("sweep: g_grid must be ascending");
    }
    const std::size_t columns = g_grid.size();
    SpectralGraph graph;
    graph.g_grid = g_grid;
    graph.levels.assign(k_levels, std::vector<double>(columns, std::numeric_limits<double>::quiet_NaN()));
    graph.parities.assign(k_levels, std::vector<int>(columns, 0));
    graph.photon.assign(k_levels, std::vector<double>(columns, std::numeric_limits<double>::quiet_NaN()));
    graph.column_converged.assign(columns, false);
    graph.column_n_trunc.assign(columns, 0);
    graph.column_residual.assign(columns, 0.0);

    const DiagonalizeOptions diag_options{options.solver, parity_filter};
    const std::size_t n_start = options.n_start > 0 ? options.n_start : std::max<std::size_t>(k_levels, 40);

    std::vector<EigenSolution> solutions(columns);
    std::vector<char> failed(columns, 0);
    parallel_for(columns, options.threads, [&](std::size_t c) {
        const ModelParams p = params_base.with_g(g_grid[c]);
        try {
            if (options.n_trunc) {
                solutions[c] = diagonalize(build_hamiltonian(p, *options.n_trunc), k_levels, diag_options);
            } else {
                solutions[c] = converged_spectrum(p, k_levels, options.rel_tol, n_start, options.n_cap,
                                                  diag_options);
            }
        } catch (const NonConvergence&) {
            failed[c] = 1;
        }
    });

    for (std::size_t c = 0; c < columns; ++c) {
        if (failed[c]) continue;
        const EigenSolution& s = solutions[c];
        graph.column_converged[c] = s.converged;
        graph.column_n_trunc[c] = s.n_trunc;
        graph.column_residual[c] = s.max_residual;
        for (std::size_t k = 0; k < std::min(k_levels, s.size()); ++k) {
            graph.levels[k][c] = s.energies[k];
            graph.parities[k][c] = sign_of(s.parity(k));
            graph.photon[k][c] = s.photon_content[k];
        }
    }
    graph.avoided_crossings = detect_avoided_crossings(graph, options.gap_window);
    return graph;
}

namespace {

// Vertex of the parabola through three points; nullopt if it opens downwards.
std::optional<std::pair<double, double>> parabola_vertex(double x0, double y0, double x1, double y1,
                                                         double x2, double y2) {
    const double d1 = (y1 - y0) / (x1 - x0);
    const double d2 = (y2 - y1) / (x2 - x1);
    const double curvature = (d2 - d1) / (x2 - x0);
    if (!(curvature > 0.0)) return std::nullopt;
    double xv = 0.5 * (x0 + x1) - d1 / (2.0 * curvature);
    xv = std::clamp(xv, x0, x2);
    const double yv = y0 + d1 * (xv - x0) + curvature * (xv - x0) * (xv - x1);
    return std::make_pair(xv, yv);
}

}  // namespace

std::vector<AvoidedCrossing> detect_avoided_crossings(const SpectralGraph& graph, std::size_t gap_window) {
    std::vector<AvoidedCrossing> out;
    const std::size_t columns = graph.column_count();
    if (columns < 3) return out;
    const std::size_t window = std::max<std::size_t>(1, gap_window);

    for (Parity p : {Parity::positive, Parity::negative}) {
        // Per column: energies of this parity, ascending.
        std::vector<std::vector<double>> sector(columns);
        for (std::size_t c = 0; c < columns; ++c) {
            for (std::size_t k = 0; k < graph.level_count(); ++k) {
                const double e = graph.levels[k][c];
                if (graph.parities[k][c] == sign_of(p) && std::isfinite(e)) sector[c].push_back(e);
            }
        }
        std::size_t depth = sector[0].size();
        for (const auto& col : sector) depth = std::min(depth, col.size());
        if (depth < 2) continue;

        for (std::size_t k = 0; k + 1 < depth; ++k) {
            std::vector<double> gap(columns);
            for (std::size_t c = 0; c < columns; ++c) gap[c] = sector[c][k + 1] - sector[c][k];

            for (std::size_t c = 1; c + 1 < columns; ++c) {
                if (!(gap[c] < gap[c - 1] && gap[c] <= gap[c + 1])) continue;
                const std::size_t lo = c >= window ? c - window : 0;
                const std::size_t hi = std::min(columns - 1, c + window);
                bool is_min = true;
                for (std::size_t j = lo; j <= hi; ++j) is_min = is_min && gap[c] <= gap[j];
                if (!is_min) continue;

                AvoidedCrossing ac;
                ac.g = graph.g_grid[c];
                ac.gap = gap[c];
                // A two-level avoided crossing has gap^2 quadratic in g, so the
                // parabola is fitted to the squared gap.
                const auto& g = graph.g_grid;
                const auto vertex = parabola_vertex(g[c - 1], gap[c - 1] * gap[c - 1], g[c], gap[c] * gap[c],
                                                    g[c + 1], gap[c + 1] * gap[c + 1]);
                if (vertex && vertex->second > 0.0) {
                    ac.g = vertex->first;
                    ac.gap = std::min(gap[c], std::sqrt(vertex->second));
                }
                ac.lower = k;
                ac.upper = k + 1;
                ac.parity = p;
                ac.energy = 0.5 * (sector[c][k] + sector[c][k + 1]);
                ac.sample = c;
                out.push_back(ac);
            }
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const AvoidedCrossing& a, const AvoidedCrossing& b) {
        if (a.parity != b.parity) return a.parity == Parity::positive;
        if (a.lower != b.lower) return a.lower < b.lower;
        return a.g < b.g;
    });
    return out;
}

std::vector<std::size_t> classify_prebics(const EigenSolution& solution, double photon_threshold) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < solution.size(); ++i) {
        if (solution.photon_content[i] < photon_threshold) out.push_back(i);
    }
    return out;
}

std::optional<std::size_t> locate_prebic(const EigenSolution& solution, int bic_index, double bic_energy,
                                         Parity parity, double photon_window, double energy_window) {
    std::optional<std::size_t> best;
    double best_distance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < solution.size(); ++i) {
        if (solution.parity(i) != parity) continue;
        if (std::abs(solution.photon_content[i] - bic_index) >= photon_window) continue;
        const double distance = std::abs(solution.energies[i] - bic_energy);
        if (distance < best_distance) {
            best_distance = distance;
            best = i;
        }
    }
    if (best && best_distance > energy_window * std::max(1.0, std::abs(bic_energy))) return std::nullopt;
    return best;
}

}  // namespace stark

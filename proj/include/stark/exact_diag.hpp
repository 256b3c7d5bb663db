// Truncated Fock ⊗ spin Hamiltonian, its lowest eigenpairs
// with parity / photon-number observables, and spectral graphs over g.
//
// Basis ordering is interleaved: index 2n is |n, up>, 2n+1 is |n, down>
// (sigma_z = +1 / -1). In this ordering H has bandwidth 3.

#pragma once

#include "stark/model.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace stark {

class TruncatedHamiltonian {
public:
    // n_trunc >= 2 Fock states; gamma >= omega is allowed here.
    TruncatedHamiltonian(const ModelParams& params, std::size_t n_trunc);

    const ModelParams& params() const noexcept { return params_; }
    std::size_t n_trunc() const noexcept { return n_trunc_; }
    std::size_t dimension() const noexcept { return 2 * n_trunc_; }

    static std::size_t index(std::size_t n, bool spin_up) noexcept { return 2 * n + (spin_up ? 0 : 1); }

    double entry(std::size_t i, std::size_t j) const;
    Eigen::MatrixXd to_dense() const;
    Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
    // Max absolute row sum; bounds the spectral norm.
    double norm_bound() const;

    // Parity sector as a tridiagonal chain |0,s0>, |1,-s0>, |2,s0>, ... with
    // s0 = +1 for positive parity. chain_index(p, n) maps back to the full basis.
    void parity_chain(Parity parity, Eigen::VectorXd& diagonal, Eigen::VectorXd& off_diagonal) const;
    static std::size_t chain_index(Parity parity, std::size_t n) noexcept;

private:
    ModelParams params_;
    std::size_t n_trunc_;
    Eigen::VectorXd diag_;
    Eigen::VectorXd band1_;  // H(i, i+1)
    Eigen::VectorXd band3_;  // H(i, i+3)
};

TruncatedHamiltonian build_hamiltonian(const ModelParams& params, std::size_t n_trunc);

enum class SolverKind {
    parity_blocks,  // two tridiagonal parity chains, LAPACK dstevr (any size)
    dense,          // full-space dense Eigen solve, reference path
};

std::string to_string(SolverKind kind);

struct DiagonalizeOptions {
    SolverKind solver{SolverKind::parity_blocks};
    std::optional<Parity> parity;  // restrict to one sector
};

struct EigenSolution {
    std::vector<double> energies;            // ascending
    std::vector<double> parity_expectation;  // <(-1)^{a^dag a} sigma_z>
    std::vector<double> photon_content;      // <a^dag a>
    std::size_t n_trunc{0};
    double max_residual{0.0};                // max ||Hv - Ev|| over returned pairs
    SolverKind solver{SolverKind::parity_blocks};
    // Set by converged_spectrum; a plain diagonalize leaves converged = true
    // and verified_n_trunc = 0 (no refinement performed).
    bool converged{true};
    std::size_t verified_n_trunc{0};

    std::size_t size() const noexcept { return energies.size(); }
    Parity parity(std::size_t i) const { return parity_from(parity_expectation.at(i)); }
    std::vector<double> energies_of(Parity p) const;
};

// Lowest k_levels eigenpairs (of the requested sector, if any). Throws
// NonConvergence when a returned pair has residual > 1e-9 ||H||.
EigenSolution diagonalize(const TruncatedHamiltonian& h, std::size_t k_levels,
                          const DiagonalizeOptions& options = {});

// Grows n_trunc by 50% from n_start until the lowest k_levels energies move by
// less than rel_tol * max(1, |E|). Returns the solution at the truncation where
// that was established; on reaching n_cap returns the last solution with
// converged = false.
EigenSolution converged_spectrum(const ModelParams& params, std::size_t k_levels, double rel_tol,
                                 std::size_t n_start, std::size_t n_cap,
                                 const DiagonalizeOptions& options = {});

struct AvoidedCrossing {
    double g{0.0};             // parabolic estimate of the gap minimum
    double gap{0.0};           // >= 0
    std::size_t lower{0};      // level index within its parity sector
    std::size_t upper{0};      // lower + 1
    Parity parity{Parity::positive};
    double energy{0.0};        // mean energy of the pair at the sampled minimum
    std::size_t sample{0};     // g-grid index of the sampled minimum
};

struct SpectralGraph {
    std::vector<double> g_grid;
    // [level][g-index]; ascending within each column.
    std::vector<std::vector<double>> levels;
    std::vector<std::vector<int>> parities;
    std::vector<std::vector<double>> photon;
    std::vector<bool> column_converged;
    std::vector<std::size_t> column_n_trunc;
    std::vector<double> column_residual;
    std::vector<AvoidedCrossing> avoided_crossings;

    std::size_t level_count() const noexcept { return levels.size(); }
    std::size_t column_count() const noexcept { return g_grid.size(); }
};

struct SweepOptions {
    // Fixed truncation; when empty each column runs converged_spectrum.
    std::optional<std::size_t> n_trunc;
    double rel_tol{1e-10};
    std::size_t n_start{0};  // 0 picks max(k_levels, 40)
    std::size_t n_cap{4000};
    SolverKind solver{SolverKind::parity_blocks};
    unsigned threads{1};
    std::size_t gap_window{1};
};

// Per-g spectra, levels matched across g by sorted index. Avoided crossings are
// detected when the grid has at least three points.
SpectralGraph sweep(const ModelParams& params_base, const std::vector<double>& g_grid,
                    std::size_t k_levels, std::optional<Parity> parity_filter,
                    const SweepOptions& options = {});

// Interior local minima (over +-gap_window samples) of the gap between
// consecutive same-parity levels, refined by a parabola through the three
// samples around each minimum.
std::vector<AvoidedCrossing> detect_avoided_crossings(const SpectralGraph& graph,
                                                      std::size_t gap_window = 1);

// Indices of states with photon content below the threshold (preBIC candidates).
std::vector<std::size_t> classify_prebics(const EigenSolution& solution,
                                          double photon_threshold = 1.0);

// State of the given parity whose photon content lies within photon_window of
// bic_index and, among those, closest in energy to bic_energy. Empty when no
// state qualifies or the closest one is further than energy_window (the preBIC
// is then hybridized with the preContinuum). energy_window is relative to
// max(1, |bic_energy|).
std::optional<std::size_t> locate_prebic(const EigenSolution& solution, int bic_index,
                                         double bic_energy, Parity parity,
                                         double photon_window = 0.5,
                                         double energy_window = 0.25);

}  // namespace stark

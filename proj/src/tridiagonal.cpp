#include "stark/tridiagonal.hpp"

#include "stark/errors.hpp"

#include <lapacke.h>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace stark {

TridiagonalEigen lowest_tridiagonal_eigenpairs(const Eigen::VectorXd& diagonal,
                                               const Eigen::VectorXd& off_diagonal,
                                               std::size_t count, bool want_vectors) {
    const auto n = static_cast<lapack_int>(diagonal.size());
    if (n == 0) throw std::invalid_argument("lowest_tridiagonal_eigenpairs: empty matrix");
    if (off_diagonal.size() != diagonal.size() - 1) {
        throw std::invalid_argument("lowest_tridiagonal_eigenpairs: off-diagonal size mismatch");
    }
    const auto m_req = static_cast<lapack_int>(std::min<std::size_t>(count, diagonal.size()));
    TridiagonalEigen out;
    if (m_req == 0) return out;

    // dstevr overwrites d and e; e needs length n.
    std::vector<double> d(diagonal.data(), diagonal.data() + n);
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    std::copy(off_diagonal.data(), off_diagonal.data() + off_diagonal.size(), e.begin());

    lapack_int found = 0;
    std::vector<double> w(static_cast<std::size_t>(n));
    const lapack_int ldz = want_vectors ? n : 1;
    std::vector<double> z(want_vectors ? static_cast<std::size_t>(n) * static_cast<std::size_t>(m_req) : 1);
    std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(std::max<lapack_int>(m_req, 1)));

    const lapack_int info =
        LAPACKE_dstevr(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'I', n, d.data(), e.data(), 0.0,
                       0.0, 1, m_req, 0.0, &found, w.data(), z.data(), ldz, isuppz.data());
    if (info != 0) {
        throw NonConvergence("LAPACKE_dstevr failed with info=" + std::to_string(info),
                             static_cast<std::size_t>(n), 0.0);
    }

    out.values = Eigen::Map<const Eigen::VectorXd>(w.data(), found);
    if (want_vectors) out.vectors = Eigen::Map<const Eigen::MatrixXd>(z.data(), n, found);
    return out;
}

}  // namespace stark

// lanczos.hpp: lowest eigenpairs of a sparse real symmetric matrix.
//
// Thick-restart Lanczos with full (twice-applied classical Gram-Schmidt)
// reorthogonalization. The projected matrix is accumulated from the
// orthogonalization coefficients, so it stays valid after restarts and after
// breakdowns that inject a fresh random direction.

#pragma once

#include "mdicke/sparse.hpp"

#include <cstdint>
#include <vector>

namespace mdicke {

struct LanczosOptions {
    int krylov{30};          // max basis size before a restart
    int max_restarts{400};
    double tol{1e-12};       // residual bound, relative to the Gershgorin norm
    std::uint64_t seed{0x5eedULL};
    int workers{0};          // 0 = OpenMP default
    // After convergence, search the orthogonal complement of the accepted
    // vectors for lower values missed inside exactly degenerate eigenspaces.
    bool verify{true};
};

struct EigenPair {
    double value{0.0};
    Eigen::VectorXd vector;
    double residual{0.0};    // ||A v - value v||
};

struct LanczosResult {
    std::vector<EigenPair> pairs;  // ascending
    bool converged{false};
    long matvecs{0};
    int restarts{0};
    double norm_bound{0.0};
};

// Lowest k eigenpairs. Never throws on non-convergence: inspect `converged`
// and the per-pair residuals.
LanczosResult lanczos_lowest(const CsrMatrix& a, int k, const LanczosOptions& opts = {});

}  // namespace mdicke

// sparse.hpp: sparse symmetric Hamiltonians and the matrix-vector kernels.

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace mdicke {

struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

// Full row-compressed storage (both triangles), columns sorted per row.
struct CsrMatrix {
    std::size_t rows{0};
    std::vector<std::size_t> row_ptr;
    std::vector<std::size_t> col;
    std::vector<double> val;

    std::size_t nnz() const { return val.size(); }
    // Max absolute row sum; an upper bound on the spectral norm.
    double norm_bound() const;
    // Principal submatrix on sorted `indices`.
    CsrMatrix restrict_to(std::span<const std::size_t> indices) const;
    Eigen::MatrixXd to_dense() const;
};

// Real symmetric Hamiltonian stored as its lower triangle (row >= col).
struct SparseHamiltonian {
    std::size_t dimension{0};
    std::vector<Triplet> lower;

    CsrMatrix to_csr() const;
    Eigen::MatrixXd to_dense() const;
};

namespace kernels {

// y = A x
void spmv_serial(const CsrMatrix& a, const double* x, double* y);
void spmv_omp(const CsrMatrix& a, const double* x, double* y, int workers = 0);

}  // namespace kernels

}  // namespace mdicke

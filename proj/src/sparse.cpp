#include "mdicke/sparse.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mdicke {

double CsrMatrix::norm_bound() const
{
    double best = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        double s = 0.0;
        for (std::size_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p) s += std::abs(val[p]);
        best = std::max(best, s);
    }
    return best;
}

CsrMatrix CsrMatrix::restrict_to(std::span<const std::size_t> indices) const
{
    constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);
    std::vector<std::size_t> remap(rows, kAbsent);
    for (std::size_t i = 0; i < indices.size(); ++i) remap[indices[i]] = i;

    CsrMatrix out;
    out.rows = indices.size();
    out.row_ptr.assign(out.rows + 1, 0);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const std::size_t r = indices[i];
        for (std::size_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p) {
            const std::size_t c = remap[col[p]];
            if (c == kAbsent) continue;
            out.col.push_back(c);
            out.val.push_back(val[p]);
        }
        out.row_ptr[i + 1] = out.val.size();
    }
    return out;
}

Eigen::MatrixXd CsrMatrix::to_dense() const
{
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, rows);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p) m(r, col[p]) += val[p];
    }
    return m;
}

CsrMatrix SparseHamiltonian::to_csr() const
{
    std::vector<std::size_t> count(dimension, 0);
    for (const auto& t : lower) {
        if (t.row >= dimension || t.col > t.row) {
            throw std::invalid_argument("SparseHamiltonian: triplet outside the lower triangle");
        }
        ++count[t.row];
        if (t.row != t.col) ++count[t.col];
    }
    CsrMatrix m;
    m.rows = dimension;
    m.row_ptr.assign(dimension + 1, 0);
    for (std::size_t r = 0; r < dimension; ++r) m.row_ptr[r + 1] = m.row_ptr[r] + count[r];
    m.col.resize(m.row_ptr.back());
    m.val.resize(m.row_ptr.back());
    std::vector<std::size_t> fill(m.row_ptr.begin(), m.row_ptr.end() - 1);
    for (const auto& t : lower) {
        m.col[fill[t.row]] = t.col;
        m.val[fill[t.row]++] = t.value;
        if (t.row != t.col) {
            m.col[fill[t.col]] = t.row;
            m.val[fill[t.col]++] = t.value;
        }
    }

    // Sort each row by column and merge duplicates.
    CsrMatrix out;
    out.rows = dimension;
    out.row_ptr.assign(dimension + 1, 0);
    std::vector<std::size_t> order;
    for (std::size_t r = 0; r < dimension; ++r) {
        const std::size_t b = m.row_ptr[r], e = m.row_ptr[r + 1];
        order.resize(e - b);
        std::iota(order.begin(), order.end(), b);
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return m.col[x] < m.col[y]; });
        for (std::size_t p : order) {
            if (out.val.size() > out.row_ptr[r] && out.col.back() == m.col[p]) {
                out.val.back() += m.val[p];
            } else {
                out.col.push_back(m.col[p]);
                out.val.push_back(m.val[p]);
            }
        }
        out.row_ptr[r + 1] = out.val.size();
    }
    return out;
}

Eigen::MatrixXd SparseHamiltonian::to_dense() const
{
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dimension, dimension);
    for (const auto& t : lower) {
        m(t.row, t.col) += t.value;
        if (t.row != t.col) m(t.col, t.row) += t.value;
    }
    return m;
}

namespace kernels {

void spmv_serial(const CsrMatrix& a, const double* x, double* y)
{
    for (std::size_t r = 0; r < a.rows; ++r) {
        double s = 0.0;
        for (std::size_t p = a.row_ptr[r]; p < a.row_ptr[r + 1]; ++p) s += a.val[p] * x[a.col[p]];
        y[r] = s;
    }
}

void spmv_omp(const CsrMatrix& a, const double* x, double* y, int workers)
{
    const int threads = workers > 0 ? workers : omp_get_max_threads();
    const long long rows = static_cast<long long>(a.rows);
#pragma omp parallel for schedule(static) num_threads(threads) if (rows > 4096)
    for (long long r = 0; r < rows; ++r) {
        double s = 0.0;
        for (std::size_t p = a.row_ptr[r]; p < a.row_ptr[r + 1]; ++p) s += a.val[p] * x[a.col[p]];
        y[r] = s;
    }
}

}  // namespace kernels

}  // namespace mdicke

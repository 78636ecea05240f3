#include "mdicke/lanczos.hpp"

#include "mdicke/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace mdicke {

namespace {

class Expander {
public:
    Expander(const CsrMatrix& a, int m, const Eigen::MatrixXd& locked, std::uint64_t seed, int workers)
        : a_(a), n_(static_cast<Eigen::Index>(a.rows)), v_(n_, m), h_(Eigen::MatrixXd::Zero(m, m)),
          locked_(locked), rng_(seed), workers_(workers)
    {
    }

    Eigen::MatrixXd& basis() { return v_; }
    Eigen::MatrixXd& projected() { return h_; }
    long matvecs() const { return matvecs_; }

    void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y)
    {
        y.resize(n_);
        kernels::spmv_omp(a_, x.data(), y.data(), workers_);
        ++matvecs_;
    }

    // Orthogonalize w against the locked vectors and the first j basis
    // vectors (CGS2); returns the first-pass basis coefficients. Both passes
    // include the locked block, otherwise the basis subtraction leaks locked
    // components back in and restarts amplify them.
    Eigen::VectorXd orthogonalize(Eigen::VectorXd& w, int j) const
    {
        Eigen::VectorXd c1;
        const auto vj = v_.leftCols(j);
        for (int pass = 0; pass < 2; ++pass) {
            if (locked_.cols() > 0) w.noalias() -= locked_ * (locked_.transpose() * w);
            if (j == 0) continue;
            const Eigen::VectorXd c = vj.transpose() * w;
            w.noalias() -= vj * c;
            if (pass == 0) c1 = c;
        }
        return c1;
    }

    // Unit vector orthogonal to the first j columns, or false when the basis
    // already spans the space.
    bool random_direction(Eigen::VectorXd& out, int j)
    {
        if (j + locked_.cols() >= n_) return false;
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (int attempt = 0; attempt < 4; ++attempt) {
            out.resize(n_);
            for (Eigen::Index i = 0; i < n_; ++i) out(i) = dist(rng_);
            orthogonalize(out, j);
            const double nrm = out.norm();
            if (nrm > 1e-8) {
                out /= nrm;
                return true;
            }
        }
        return false;
    }

private:
    const CsrMatrix& a_;
    Eigen::Index n_;
    Eigen::MatrixXd v_;
    Eigen::MatrixXd h_;
    const Eigen::MatrixXd& locked_;
    std::mt19937_64 rng_;
    int workers_;
    long matvecs_{0};
};

// Lowest k eigenpairs of A restricted to the orthogonal complement of the
// (orthonormal) columns of `locked`.
LanczosResult run(const CsrMatrix& a, int k, const LanczosOptions& opts, const Eigen::MatrixXd& locked,
                  std::uint64_t seed)
{
    const int n = static_cast<int>(a.rows) - static_cast<int>(locked.cols());

    LanczosResult res;
    res.norm_bound = a.norm_bound();
    const double scale = std::max(res.norm_bound, 1e-300);
    const double target = opts.tol * scale;

    const int m = std::min(n, std::max(opts.krylov, 2 * k + 8));
    Expander ex(a, m, locked, seed, opts.workers);
    Eigen::MatrixXd& v = ex.basis();
    Eigen::MatrixXd& h = ex.projected();

    Eigen::VectorXd start;
    ex.random_direction(start, 0);
    v.col(0) = start;

    int j = 0;             // populated basis columns
    bool exhausted = false; // basis spans the whole space
    Eigen::VectorXd w, y, ay;

    for (int restart = 0;; ++restart) {
        // Grow the basis to m columns from the last one.
        while (!exhausted && j < m) {
            ex.apply(v.col(j), w);
            const Eigen::VectorXd c = ex.orthogonalize(w, j + 1);
            h.col(j).head(j + 1) = c;
            h.row(j).head(j + 1) = c.transpose();
            ++j;
            if (j == m) break;
            const double beta = w.norm();
            if (beta > 1e-12 * scale) {
                v.col(j) = w / beta;
            } else if (Eigen::VectorXd fresh; ex.random_direction(fresh, j)) {
                v.col(j) = fresh;
            } else {
                exhausted = true;
                break;
            }
        }
        if (j == n) exhausted = true;

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.topLeftCorner(j, j));
        if (es.info() != Eigen::Success) throw NumericalError("lanczos_lowest: projected eigensolve failed");
        const Eigen::VectorXd& theta = es.eigenvalues();
        const Eigen::MatrixXd& s = es.eigenvectors();

        res.pairs.clear();
        bool ok = true;
        for (int i = 0; i < k; ++i) {
            y = v.leftCols(j) * s.col(i);
            y.normalize();
            ex.apply(y, ay);
            EigenPair p;
            p.value = theta(i);
            p.residual = (ay - theta(i) * y).norm();
            p.vector = y;
            ok = ok && p.residual <= target;
            res.pairs.push_back(std::move(p));
        }
        res.restarts = restart;
        if (ok || exhausted) {
            res.converged = ok || exhausted;
            break;
        }
        if (restart >= opts.max_restarts) break;

        // Thick restart: keep the lowest Ritz vectors plus the continuation
        // direction, which is orthogonal to all of them.
        Eigen::VectorXd next = w;
        const double beta = next.norm();
        bool have_next = beta > 1e-12 * scale;
        if (have_next) next /= beta;

        const int keep = std::min(j - 1, std::max(k + 2, m / 2));
        const Eigen::MatrixXd kept = v.leftCols(j) * s.leftCols(keep);
        v.leftCols(keep) = kept;
        h.setZero();
        for (int i = 0; i < keep; ++i) h(i, i) = theta(i);
        j = keep;
        if (!have_next) have_next = ex.random_direction(next, j);
        if (!have_next) {
            exhausted = true;
            continue;
        }
        // Re-orthogonalize against the rotated basis for safety.
        ex.orthogonalize(next, j);
        next.normalize();
        v.col(j) = next;
    }
    res.matvecs = ex.matvecs();
    return res;
}

}  // namespace

LanczosResult lanczos_lowest(const CsrMatrix& a, int k, const LanczosOptions& opts)
{
    const int n = static_cast<int>(a.rows);
    if (k < 1 || n < k) throw InputError("lanczos_lowest: need 1 <= k <= dimension");
    LanczosResult res = run(a, k, opts, Eigen::MatrixXd(a.rows, 0), opts.seed);
    if (!opts.verify || !res.converged) return res;

    // A single Krylov sequence sees one vector per exactly degenerate
    // eigenspace. Probe the complement of the accepted vectors from a fresh
    // start; anything below the k-th value replaces it.
    const double slack = opts.tol * std::max(res.norm_bound, 1e-300);
    for (int probe = 1; probe <= n && k < n; ++probe) {
        Eigen::MatrixXd locked(a.rows, k);
        for (int i = 0; i < k; ++i) locked.col(i) = res.pairs[i].vector;
        LanczosResult extra = run(a, 1, opts, locked, opts.seed + static_cast<std::uint64_t>(probe));
        res.matvecs += extra.matvecs;
        res.restarts += extra.restarts;
        if (!extra.converged) {
            res.converged = false;
            break;
        }
        if (!(extra.pairs[0].value < res.pairs.back().value - slack)) break;
        // A genuine new direction must be orthogonal to the accepted ones.
        if ((locked.transpose() * extra.pairs[0].vector).norm() > 1e-6) break;
        res.pairs.back() = std::move(extra.pairs[0]);
        std::stable_sort(res.pairs.begin(), res.pairs.end(),
                         [](const EigenPair& x, const EigenPair& y) { return x.value < y.value; });
    }
    return res;
}

}  // namespace mdicke

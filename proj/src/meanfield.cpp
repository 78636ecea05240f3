#include "mdicke/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mdicke {

const char* to_string(Phase p)
{
    return p == Phase::Normal ? "normal" : "superradiant";
}

const char* to_string(TransitionOrder t)
{
    return t == TransitionOrder::FirstOrder ? "first" : "second";
}

MeanFieldMatrix::MeanFieldMatrix(const AtomModel& model, double kappa)
    : model_(model), kappa_(kappa), real_(model.is_real())
{
    if (real_) d_re_ = model.d_real();
}

double MeanFieldMatrix::ground_energy(double phi) const
{
    const int l = model_.levels;
    const double shift = kappa_ * phi * phi;
    if (real_) {
        Eigen::MatrixXd m = phi * d_re_;
        for (int k = 0; k < l; ++k) m(k, k) += model_.h_diag[k] + shift;
        if (l == 2) {
            const double mean = 0.5 * (m(0, 0) + m(1, 1));
            const double half = 0.5 * (m(0, 0) - m(1, 1));
            return mean - std::hypot(half, m(0, 1));
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
        return es.eigenvalues()(0);
    }
    Eigen::MatrixXcd m = phi * model_.d_matrix;
    for (int k = 0; k < l; ++k) m(k, k) += model_.h_diag[k] + shift;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

void MeanFieldMatrix::eigensystem(double phi, Eigen::VectorXd& values, Eigen::MatrixXcd& vectors) const
{
    const int l = model_.levels;
    Eigen::MatrixXcd m = phi * model_.d_matrix;
    for (int k = 0; k < l; ++k) m(k, k) += model_.h_diag[k] + kappa_ * phi * phi;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    if (es.info() != Eigen::Success) throw NumericalError("mean-field eigensolve failed");
    values = es.eigenvalues();
    vectors = es.eigenvectors();
}

double MeanFieldMatrix::slope(double phi) const
{
    Eigen::VectorXd values;
    Eigen::MatrixXcd vectors;
    eigensystem(phi, values, vectors);
    const Eigen::VectorXcd v = vectors.col(0);
    return (v.adjoint() * model_.d_matrix * v)(0).real() + 2.0 * kappa_ * phi;
}

double ground_energy(const AtomModel& model, double kappa, double phi)
{
    return MeanFieldMatrix(model, kappa).ground_energy(phi);
}

namespace {

constexpr double kInvPhi = 0.6180339887498949;

// Golden-section minimization of f on [a, b].
template <class F>
double golden_minimize(F&& f, double a, double b, double tol)
{
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc <= fd) {
            b = d; d = c; fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// Sharpen a golden-section estimate by bisecting the sign change of the
// analytic slope. Returns x unchanged when no bracket is found.
double polish_stationary(const MeanFieldMatrix& mf, double x, double lo_limit, double hi_limit)
{
    double w = 1e-9 * (1.0 + x);
    double lo = 0.0, hi = 0.0;
    bool found = false;
    for (int i = 0; i < 12; ++i, w *= 10.0) {
        lo = std::max(lo_limit, x - w);
        hi = std::min(hi_limit, x + w);
        if (lo > 0.0 && mf.slope(lo) < 0.0 && mf.slope(hi) > 0.0) {
            found = true;
            break;
        }
        if (lo <= lo_limit && hi >= hi_limit) break;
    }
    if (!found) return x;
    for (int it = 0; it < 200 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (mf.slope(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

MeanFieldSolution order_parameter(const AtomModel& model, double kappa, const MeanFieldOptions& opts)
{
    if (!(kappa > 0.0)) throw InputError("kappa must be positive");
    const MeanFieldMatrix mf(model, kappa);
    const double c1 = ordinary_critical_residual(model, kappa);
    // c1 below zero by more than rounding: phi = 0 is a local maximum.
    const bool unstable = c1 < -1e-13 * (kappa + std::abs(kappa - c1));
    const double tie = opts.energy_tie_rel * std::max(1.0, model.max_h());

    double phi_max = 0.0;
    for (int k = 1; k < model.levels; ++k) {
        phi_max = std::max(phi_max, 2.0 * std::sqrt(model.h_diag[k] / kappa));
    }
    if (phi_max <= 0.0) phi_max = 1.0;

    const int n = std::max(opts.grid_points, 4);
    int best = 0;
    double best_e = 0.0;
    double step = 0.0;
    for (int attempt = 0;; ++attempt) {
        step = phi_max / n;
        best = 0;
        best_e = mf.ground_energy(0.0);
        for (int i = 1; i <= n; ++i) {
            const double e = mf.ground_energy(i * step);
            if (e < best_e) {
                best_e = e;
                best = i;
            }
        }
        if (best < n) break;
        if (attempt == opts.max_doublings) {
            throw NumericalError("order_parameter: minimum not bracketed; energy unbounded below?");
        }
        phi_max *= 2.0;
    }

    MeanFieldSolution sol;
    if (best == 0 && !unstable) return sol;  // phi = 0 is the global grid minimum and stable

    const double lo = best == 0 ? 0.0 : (best - 1) * step;
    const double hi = (best + 1) * step;
    auto f = [&](double p) { return mf.ground_energy(p); };
    double x = golden_minimize(f, lo, hi, 1e-10 * (1.0 + hi));
    x = polish_stationary(mf, x, lo, hi);
    const double e = std::min(mf.ground_energy(x), 0.0);

    if (unstable || e < -tie) {
        if (x >= opts.zero_phi_tol || unstable) {
            sol.phi_star = x;
            sol.energy = e;
            sol.phase = Phase::Superradiant;
        }
    }
    return sol;
}

LandauCoefficients landau_coefficients(const AtomModel& model, double kappa, int max_order)
{
    if (max_order < 1) throw InputError("landau_coefficients: max_order must be >= 1");
    const int l = model.levels;
    const double h0 = model.h_diag[0];
    for (int k = 1; k < l; ++k) {
        if (std::abs(model.h_diag[k] - h0) <= 1e-14 * std::max(1.0, std::abs(h0))) {
            throw InputError("landau_coefficients: unperturbed ground level is degenerate");
        }
    }

    const int order = 2 * max_order;
    const Eigen::MatrixXcd& v = model.d_matrix;
    std::vector<Eigen::VectorXcd> psi(order + 1, Eigen::VectorXcd::Zero(l));
    std::vector<double> energy(order + 1, 0.0);
    psi[0](0) = 1.0;
    energy[0] = h0;

    LandauCoefficients out;
    double scale = 1.0;
    for (int p = 1; p <= order; ++p) {
        const Eigen::VectorXcd vpsi = v * psi[p - 1];
        energy[p] = vpsi(0).real();
        Eigen::VectorXcd rhs = -vpsi;
        for (int k = 1; k < p; ++k) rhs += energy[k] * psi[p - k];
        for (int m = 1; m < l; ++m) psi[p](m) = rhs(m) / (model.h_diag[m] - h0);
        psi[p](0) = 0.0;

        if (p % 2 == 1) {
            out.max_odd_correction = std::max(out.max_odd_correction, std::abs(energy[p]));
            if (std::abs(energy[p]) > 1e-12 * scale) {
                throw NumericalError("landau_coefficients: odd-order correction does not vanish "
                                     "(dipole matrix breaks the Z2 symmetry)");
            }
        } else {
            scale = std::max(scale, std::abs(energy[p]));
        }
    }

    out.c.assign(max_order + 1, 0.0);
    out.c[0] = h0;
    out.c[1] = kappa + energy[2];
    for (int k = 2; k <= max_order; ++k) out.c[k] = energy[2 * k];
    return out;
}

double ordinary_critical_residual(const AtomModel& model, double kappa)
{
    double sum = 0.0;
    for (int k = 1; k < model.levels; ++k) {
        sum += std::norm(model.d_matrix(0, k)) / model.h_diag[k];
    }
    return kappa - sum;
}

double c2_residual(const AtomModel& model, double /*kappa*/)
{
    const int l = model.levels;
    const auto& d = model.d_matrix;
    const auto& h = model.h_diag;

    cplx lhs = 0.0;
    for (int a = 1; a < l; ++a) {
        if (d(0, a) == 0.0) continue;
        for (int b = 1; b < l; ++b) {
            if (d(a, b) == 0.0) continue;
            for (int c = 1; c < l; ++c) {
                lhs += d(0, a) * d(a, b) * d(b, c) * d(c, 0) / (h[a] * h[b] * h[c]);
            }
        }
    }
    double rhs = 0.0;
    for (int a = 1; a < l; ++a) {
        for (int b = 1; b < l; ++b) {
            rhs += std::norm(d(0, a)) * std::norm(d(0, b)) / (h[a] * h[a] * h[b]);
        }
    }
    return lhs.real() - rhs;
}

int tclass_criticality_order(const TClassModel& model, double kappa, double tol)
{
    int n = 1;
    for (int k = 1; k < model.levels; ++k) {
        const double lhs = model.couplings[k - 1] * model.couplings[k - 1];
        const double rhs = kappa * model.h_diag[k];
        if (std::abs(lhs - rhs) > tol * std::max(1.0, std::abs(rhs))) break;
        n = k + 1;
    }
    return n;
}

ZetaPolynomial tclass_determinant(const TClassModel& model, double kappa, double phi, double tol)
{
    using Poly = std::vector<double>;
    const double x = phi * phi;

    // zeta_0 = 1, zeta_1 = h_11 + kappa x
    Poly prev{1.0};
    Poly cur{model.h_diag[0], kappa};
    double v_prev = 1.0;
    double v_cur = model.h_diag[0] + kappa * x;

    for (int k = 1; k < model.levels; ++k) {
        const double c2 = model.couplings[k - 1] * model.couplings[k - 1];
        Poly next(cur.size() + 1, 0.0);
        for (std::size_t i = 0; i < cur.size(); ++i) {
            next[i] += model.h_diag[k] * cur[i];
            next[i + 1] += kappa * cur[i];
        }
        for (std::size_t i = 0; i < prev.size(); ++i) next[i + 1] -= c2 * prev[i];
        const double v_next = (model.h_diag[k] + kappa * x) * v_cur - x * c2 * v_prev;
        prev = std::move(cur);
        cur = std::move(next);
        v_prev = v_cur;
        v_cur = v_next;
    }

    ZetaPolynomial out;
    out.value = v_cur;
    out.coefficients = cur;
    double scale = 0.0;
    for (double c : cur) scale = std::max(scale, std::abs(c));
    for (std::size_t i = 0; i < cur.size(); ++i) {
        if (std::abs(cur[i]) > tol * scale) {
            out.lowest_power = static_cast<int>(2 * i);
            break;
        }
    }
    return out;
}

}  // namespace mdicke

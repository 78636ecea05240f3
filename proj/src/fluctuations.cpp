#include "mdicke/fluctuations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mdicke {

FluctuationInput build_fluctuation_input(const AtomModel& model, const ModelParams& params)
{
    const MeanFieldSolution mf = order_parameter(model, params.kappa);
    FluctuationInput in = fluctuation_input_at(model, params, mf.phi_star);
    if (std::abs(in.d11) > 1e-8) {
        throw NumericalError("build_fluctuation_input: <1|D|1> does not vanish at the minimizer");
    }
    return in;
}

FluctuationInput fluctuation_input_at(const AtomModel& model, const ModelParams& params, double phi)
{
    const MeanFieldMatrix mf(model, params.kappa);
    Eigen::VectorXd eps;
    Eigen::MatrixXcd u;
    mf.eigensystem(phi, eps, u);

    const int l = model.levels;
    const double escale = std::max(1.0, eps.cwiseAbs().maxCoeff());
    if (eps(1) - eps(0) <= 1e-10 * escale) {
        throw InputError("mean-field ground state is degenerate; Gaussian expansion undefined");
    }

    Eigen::MatrixXcd shifted = model.d_matrix;
    for (int k = 0; k < l; ++k) shifted(k, k) += 2.0 * params.kappa * phi;
    const Eigen::MatrixXcd dm = u.adjoint() * shifted * u;

    FluctuationInput in;
    in.phi = phi;
    in.d11 = dm(0, 0).real();

    // Degenerate excitation blocks collapse to one bright combination.
    const double wmax = eps(l - 1) - eps(0);
    const double dscale = std::max(1.0, dm.cwiseAbs().maxCoeff());
    int k = 1;
    while (k < l) {
        const double w = eps(k) - eps(0);
        double weight = std::norm(dm(0, k));
        int end = k + 1;
        while (end < l && (eps(end) - eps(0)) - (eps(end - 1) - eps(0)) < 1e-10 * wmax) {
            weight += std::norm(dm(0, end));
            ++end;
        }
        const double coupling = std::sqrt(weight);
        const int block = end - k;
        if (coupling > 1e-12 * dscale) {
            in.coupling.push_back(coupling);
            in.excitation.push_back(w);
            for (int b = 1; b < block; ++b) in.dark_excitation.push_back(w);
        } else {
            for (int b = 0; b < block; ++b) in.dark_excitation.push_back(w);
        }
        k = end;
    }
    return in;
}

Eigen::MatrixXd build_omega_sq(const FluctuationInput& input, double omega, double g)
{
    const int n = 1 + static_cast<int>(input.excitation.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    m(0, 0) = omega * omega;
    for (int k = 1; k < n; ++k) {
        const double wk = input.excitation[k - 1];
        m(k, k) = wk * wk;
        m(0, k) = m(k, 0) = g * input.coupling[k - 1] * std::sqrt(omega * wk);
    }
    return m;
}

double secular_function(const FluctuationInput& input, double omega, double g, double x)
{
    double sum = 0.0;
    for (std::size_t k = 0; k < input.excitation.size(); ++k) {
        const double wk = input.excitation[k];
        sum += input.coupling[k] * input.coupling[k] * wk / (x - wk * wk);
    }
    return omega * omega - x + g * g * omega * sum;
}

namespace {

// q is strictly decreasing between poles: positive at lo, negative at hi.
template <class F>
double bisect_decreasing(F&& q, double lo, double hi)
{
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (q(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

SecularRoots secular_roots(const FluctuationInput& input, double omega, double g)
{
    SecularRoots out;
    const auto& w = input.excitation;
    const std::size_t nb = w.size();
    if (nb == 0 || g == 0.0) {
        out.lambda_sq.push_back(omega * omega);
        for (double wk : w) out.lambda_sq.push_back(wk * wk);
        std::sort(out.lambda_sq.begin(), out.lambda_sq.end());
        return out;
    }
    auto q = [&](double x) { return secular_function(input, omega, g, x); };

    // lambda_1^2 in (-inf, min(w^2, w_2^2))
    const double upper = std::min(omega * omega, w[0] * w[0]);
    double lo = 0.0;
    if (!(q(lo) > 0.0)) {
        double step = std::max(upper, 1e-12);
        lo = -step;
        while (!(q(lo) > 0.0)) {
            step *= 2.0;
            lo = -step;
            if (!std::isfinite(lo)) throw NumericalError("secular_roots: lower bracket not found");
        }
    }
    out.lambda_sq.push_back(bisect_decreasing(q, lo, upper));

    for (std::size_t k = 0; k + 1 < nb; ++k) {
        out.lambda_sq.push_back(bisect_decreasing(q, w[k] * w[k], w[k + 1] * w[k + 1]));
    }

    const double top = w[nb - 1] * w[nb - 1];
    double step = std::max({top, omega * omega, 1.0});
    double hi = top + step;
    while (!(q(hi) < 0.0)) {
        step *= 2.0;
        hi = top + step;
    }
    out.lambda_sq.push_back(bisect_decreasing(q, top, hi));
    // Rounding-level negatives at the critical point count as zero.
    double& first = out.lambda_sq.front();
    if (first < 0.0 && first >= -1e-12 * out.lambda_sq.back()) first = 0.0;
    out.valid = first >= 0.0;
    return out;
}

double entropy_from_gamma(double gamma)
{
    if (std::isinf(gamma)) return 0.0;
    if (gamma <= 0.0) return std::numeric_limits<double>::infinity();
    if (gamma < 1e-6) return 1.0 - std::log(gamma) + gamma * gamma / 24.0;
    return gamma / std::expm1(gamma) - std::log(-std::expm1(-gamma));
}

EntropyResult entanglement_entropy(const FluctuationSpectrum& s)
{
    EntropyResult r;
    if (!s.valid) {
        r.gamma = r.entropy = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    const double fischer = s.omega_11 * s.minor_11;
    if (!(s.det_omega > 0.0)) {
        r.divergent = true;
        r.gamma = 0.0;
        r.entropy = std::numeric_limits<double>::infinity();
        return r;
    }
    // cosh(gamma) = (F + det)/(F - det)  <=>  tanh^2(gamma/2) = det/F
    double t = s.det_omega / fischer;
    if (t > 1.0 + 1e-10) {
        throw NumericalError("entanglement_entropy: det Omega exceeds Omega_11 M_11 (not positive definite?)");
    }
    t = std::min(t, 1.0);
    r.gamma = 2.0 * std::atanh(std::sqrt(t));
    r.entropy = entropy_from_gamma(r.gamma);
    return r;
}

double photon_fluctuation(const FluctuationSpectrum& s)
{
    if (!s.valid) return std::numeric_limits<double>::quiet_NaN();
    if (!(s.det_omega > 0.0)) return std::numeric_limits<double>::infinity();
    return s.photon_omega * s.minor_11 / s.det_omega;
}

double depletion(const FluctuationSpectrum& s, const FluctuationInput& input)
{
    if (!s.valid) return std::numeric_limits<double>::quiet_NaN();
    if (!(s.det_omega > 0.0)) return std::numeric_limits<double>::infinity();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.omega_sq);
    const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::MatrixXd inv = es.eigenvectors() * root.cwiseInverse().asDiagonal() *
                                es.eigenvectors().transpose();
    double total = 0.0;
    for (std::size_t k = 0; k < input.excitation.size(); ++k) {
        const double wk = input.excitation[k];
        const int i = static_cast<int>(k) + 1;
        const double x2 = 0.5 * inv(i, i);
        const double p2 = 0.5 * s.omega_root(i, i);
        total += 0.5 * (wk * x2 + p2 / wk - 1.0);
    }
    return total;
}

FluctuationSpectrum fluctuation_spectrum(const FluctuationInput& input, const ModelParams& params)
{
    const double omega = params.omega;
    const double g = params.g();

    FluctuationSpectrum s;
    s.photon_omega = omega;
    s.omega_sq = build_omega_sq(input, omega, g);
    const SecularRoots roots = secular_roots(input, omega, g);
    s.lambda_sq = roots.lambda_sq;
    s.valid = roots.valid;
    for (double x : s.lambda_sq) {
        s.lambdas.push_back(x >= 0.0 ? std::sqrt(x) : std::numeric_limits<double>::quiet_NaN());
    }
    if (!s.valid) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        s.gamma = s.entropy = s.gap = s.photon_fluct = s.depletion = s.det_omega = nan;
        return s;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.omega_sq);
    if (es.info() != Eigen::Success) throw NumericalError("fluctuation_spectrum: eigensolve failed");
    const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
    if (es.eigenvalues()(0) < -1e-12 * norm && s.lambda_sq.front() > 1e-12 * norm) {
        throw NumericalError("fluctuation_spectrum: Omega^2 not positive semidefinite");
    }
    const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    s.omega_root = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();

    s.det_omega = 1.0;
    for (double lam : s.lambdas) s.det_omega *= lam;
    s.omega_11 = s.omega_root(0, 0);
    const int n = static_cast<int>(s.omega_root.rows());
    s.minor_11 = n > 1 ? s.omega_root.bottomRightCorner(n - 1, n - 1).determinant() : 1.0;

    const EntropyResult e = entanglement_entropy(s);
    s.gamma = e.gamma;
    s.entropy = e.entropy;
    s.divergent = e.divergent;
    s.gap = s.lambdas.front();
    s.photon_fluct = photon_fluctuation(s);
    s.depletion = depletion(s, input);
    return s;
}

}  // namespace mdicke

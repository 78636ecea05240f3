// Shared fixtures and independent oracles for the test suites.

#pragma once

#include "mdicke/ed.hpp"
#include "mdicke/fluctuations.hpp"
#include "mdicke/model.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace testsupport {

using mdicke::AtomModel;

inline AtomModel two_level(double h22, double d12 = std::sqrt(2.0))
{
    return mdicke::TClassModel{2, {0.0, h22}, {d12}}.expand();
}

inline AtomModel reference(int order) { return mdicke::raman_scheme_model(order).model.expand(); }

// Real Z2-symmetric model with random parities, energies in [0.5, 4] and
// couplings in [-1.5, 1.5]; level 0 is even and at least one level is odd.
inline AtomModel random_model(std::mt19937_64& rng, int levels)
{
    std::uniform_real_distribution<double> energy(0.5, 4.0), coupling(-1.5, 1.5), unit(0.0, 1.0);
    AtomModel m;
    m.levels = levels;
    m.h_diag.assign(levels, 0.0);
    m.parity_signs.assign(levels, 1);
    for (int k = 1; k < levels; ++k) {
        m.h_diag[k] = energy(rng);
        m.parity_signs[k] = unit(rng) < 0.5 ? 1 : -1;
    }
    m.parity_signs[1 + static_cast<int>(unit(rng) * (levels - 1)) % (levels - 1)] = -1;
    m.d_matrix = Eigen::MatrixXcd::Zero(levels, levels);
    for (int i = 0; i < levels; ++i) {
        for (int j = i + 1; j < levels; ++j) {
            if (m.parity_signs[i] == m.parity_signs[j]) continue;
            double v = coupling(rng);
            if (i == 0 && std::abs(v) < 0.2) v = 0.2;  // keep every odd level reachable from the ground level
            m.d_matrix(i, j) = m.d_matrix(j, i) = v;
        }
    }
    return m;
}

inline mdicke::TClassModel random_tclass(std::mt19937_64& rng, int levels)
{
    std::uniform_real_distribution<double> energy(0.5, 4.0), coupling(0.1, 2.0);
    mdicke::TClassModel t;
    t.levels = levels;
    t.h_diag.assign(levels, 0.0);
    for (int k = 1; k < levels; ++k) t.h_diag[k] = energy(rng);
    for (int k = 1; k < levels; ++k) t.couplings.push_back(coupling(rng));
    return t;
}

struct FockOracle {
    double entropy_photon{0.0};
    double entropy_atoms{0.0};
    double photon_fluct{0.0};  // <(b + b^dag)^2>
    double depletion{0.0};     // sum of atomic-mode occupations
    double e0{0.0};
};

// Ground state of
//   H = w b'b + sum_i w_i b_i'b_i + (g/2) sum_i |D_1i| (b + b')(b_i + b_i')
// in a truncated Fock space with `cutoff` quanta per mode. The photon index
// is the slowest, so the ground vector reshapes to (cutoff+1) x rest.
inline FockOracle heff_fock_oracle(const mdicke::FluctuationInput& in, double omega, double g, int cutoff)
{
    const int modes = 1 + static_cast<int>(in.excitation.size());
    const int q = cutoff + 1;
    std::vector<std::size_t> stride(modes, 1);
    for (int m = modes - 2; m >= 0; --m) stride[m] = stride[m + 1] * q;
    const std::size_t dim = stride[0] * q;
    std::vector<double> freq{omega};
    freq.insert(freq.end(), in.excitation.begin(), in.excitation.end());

    mdicke::SparseHamiltonian h;
    h.dimension = dim;
    std::vector<int> occ(modes);
    for (std::size_t s = 0; s < dim; ++s) {
        std::size_t rest = s;
        double diag = 0.0;
        for (int m = 0; m < modes; ++m) {
            occ[m] = static_cast<int>(rest / stride[m]);
            rest %= stride[m];
            diag += freq[m] * occ[m];
        }
        h.lower.push_back({s, s, diag});
        for (int i = 1; i < modes; ++i) {
            const double c = 0.5 * g * in.coupling[i - 1];
            for (int dp : {-1, 1}) {
                for (int di : {-1, 1}) {
                    const int np = occ[0] + dp, ni = occ[i] + di;
                    if (np < 0 || np >= q || ni < 0 || ni >= q) continue;
                    const double amp = std::sqrt(static_cast<double>(std::max(occ[0], np))) *
                                       std::sqrt(static_cast<double>(std::max(occ[i], ni)));
                    const std::size_t t = s + dp * stride[0] + di * stride[i];
                    if (t < s) h.lower.push_back({s, t, c * amp});
                }
            }
        }
    }

    mdicke::LanczosOptions lo;
    lo.tol = 1e-13;
    const mdicke::LanczosResult lr = mdicke::lanczos_lowest(h.to_csr(), 1, lo);
    const Eigen::VectorXd& v = lr.pairs[0].vector;

    FockOracle out;
    out.e0 = lr.pairs[0].value;
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMajor> mat(v.data(), q, static_cast<Eigen::Index>(stride[0]));
    const Eigen::MatrixXd rho_ph = mat * mat.transpose();
    const Eigen::MatrixXd rho_at = mat.transpose() * mat;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eph(rho_ph, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eat(rho_at, Eigen::EigenvaluesOnly);
    out.entropy_photon = mdicke::shannon_entropy(eph.eigenvalues());
    out.entropy_atoms = mdicke::shannon_entropy(eat.eigenvalues());

    // (b + b')^2 = b^2 + b'^2 + 2 b'b + 1, evaluated on the photon reduced density matrix.
    double x2 = 0.0;
    for (int n = 0; n < q; ++n) {
        x2 += rho_ph(n, n) * (2.0 * n + 1.0);
        if (n + 2 < q) x2 += 2.0 * rho_ph(n, n + 2) * std::sqrt((n + 1.0) * (n + 2.0));
    }
    out.photon_fluct = x2;
    for (std::size_t s = 0; s < dim; ++s) {
        std::size_t rest = s % stride[0];
        for (int m = 1; m < modes; ++m) {
            out.depletion += v(s) * v(s) * static_cast<double>(rest / stride[m]);
            rest %= stride[m];
        }
    }
    return out;
}

}  // namespace testsupport

#include "support.hpp"

#include "mdicke/ed.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace mdicke;
using testsupport::two_level;

namespace {

// Distinguishable-atom Hamiltonian on photons (x) atom_1 (x) ... (x) atom_N,
// projected onto the permutation-symmetric subspace with a symmetrizer.
// Returns the ascending spectrum.
Eigen::VectorXd symmetric_spectrum_oracle(const AtomModel& m, const ModelParams& p, int atoms, int n_max)
{
    const int l = m.levels;
    int da = 1;
    for (int k = 0; k < atoms; ++k) da *= l;
    const int q = n_max + 1;
    const Eigen::MatrixXd d = m.d_real();

    auto digit = [&](int s, int k) {
        for (int i = 0; i < k; ++i) s /= l;
        return s % l;
    };
    Eigen::MatrixXd hat = Eigen::MatrixXd::Zero(da, da);   // sum_k h^(k)
    Eigen::MatrixXd dat = Eigen::MatrixXd::Zero(da, da);   // sum_k d^(k)
    for (int s = 0; s < da; ++s) {
        for (int k = 0; k < atoms; ++k) {
            const int ik = digit(s, k);
            hat(s, s) += m.h_diag[ik];
            int pow = 1;
            for (int i = 0; i < k; ++i) pow *= l;
            for (int j = 0; j < l; ++j) dat(s + (j - ik) * pow, s) += d(j, ik);
        }
    }
    Eigen::MatrixXd adag = Eigen::MatrixXd::Zero(q, q);
    for (int n = 0; n + 1 < q; ++n) adag(n + 1, n) = std::sqrt(n + 1.0);
    const Eigen::MatrixXd x = adag + adag.transpose();
    Eigen::MatrixXd num = Eigen::MatrixXd::Zero(q, q);
    for (int n = 0; n < q; ++n) num(n, n) = n;

    const Eigen::MatrixXd ia = Eigen::MatrixXd::Identity(da, da);
    const Eigen::MatrixXd iq = Eigen::MatrixXd::Identity(q, q);
    auto kron = [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
        Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
        return out;
    };
    const Eigen::MatrixXd h = p.omega * kron(num, ia) +
                              p.g() / (2.0 * std::sqrt(double(atoms))) * kron(x, dat) + kron(iq, hat);

    // Symmetrizer: average over all permutations of the atom factors.
    Eigen::MatrixXd sym = Eigen::MatrixXd::Zero(da, da);
    std::vector<int> perm(atoms);
    std::iota(perm.begin(), perm.end(), 0);
    int count = 0;
    do {
        for (int s = 0; s < da; ++s) {
            int t = 0, pow = 1;
            for (int k = 0; k < atoms; ++k, pow *= l) t += digit(s, perm[k]) * pow;
            sym(t, s) += 1.0;
        }
        ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    sym /= count;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ps(kron(iq, sym));
    std::vector<int> cols;
    for (Eigen::Index i = 0; i < ps.eigenvalues().size(); ++i) {
        if (ps.eigenvalues()(i) > 0.5) cols.push_back(static_cast<int>(i));
    }
    Eigen::MatrixXd qb(h.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) qb.col(c) = ps.eigenvectors().col(cols[c]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(qb.transpose() * h * qb, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

// Dense lowest state of one parity sector.
std::pair<double, Eigen::VectorXd> dense_sector_ground(const AtomModel& m, const ModelParams& p,
                                                       const SymmetricBasis& b, int parity)
{
    const Eigen::MatrixXd h = assemble_hamiltonian(m, p, b).to_dense();
    std::vector<Eigen::Index> idx;
    for (int n = 0; n <= b.n_max(); ++n) {
        for (std::size_t a = 0; a < b.dim_atoms(); ++a) {
            if (state_parity(m, b, n, a) == parity) idx.push_back(static_cast<Eigen::Index>(b.state(n, a)));
        }
    }
    Eigen::MatrixXd sub(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        for (std::size_t j = 0; j < idx.size(); ++j) sub(i, j) = h(idx[i], idx[j]);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub);
    Eigen::VectorXd full = Eigen::VectorXd::Zero(h.rows());
    for (std::size_t i = 0; i < idx.size(); ++i) full(idx[i]) = es.eigenvectors()(i, 0);
    return {es.eigenvalues()(0), full};
}

}  // namespace

TEST_CASE("single atom reduces to the Rabi form")
{
    const double g = 1.3, w = 0.9, h22 = 1.7, d12 = 1.1;
    const ModelParams p = make_params(w, w / (g * g));
    const SymmetricBasis b(1, 2, 9);
    const Eigen::MatrixXd h = assemble_hamiltonian(two_level(h22, d12), p, b).to_dense();
    // Basis: atom index 0 is chi = (0, 1) (excited), 1 is (1, 0) (ground).
    Eigen::MatrixXd oracle = Eigen::MatrixXd::Zero(20, 20);
    for (int n = 0; n <= 9; ++n) {
        oracle(2 * n, 2 * n) = w * n + h22;
        oracle(2 * n + 1, 2 * n + 1) = w * n;
        if (n < 9) {
            const double c = 0.5 * g * d12 * std::sqrt(n + 1.0);
            oracle(2 * (n + 1), 2 * n + 1) = oracle(2 * n + 1, 2 * (n + 1)) = c;
            oracle(2 * (n + 1) + 1, 2 * n) = oracle(2 * n, 2 * (n + 1) + 1) = c;
        }
    }
    CHECK((h - oracle).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("symmetric-subspace Hamiltonian matches the distinguishable-atom oracle")
{
    struct Case {
        AtomModel model;
        int atoms;
        int n_max;
    };
    std::mt19937_64 rng(5);
    std::vector<Case> cases{{two_level(2.0), 2, 6},
                            {two_level(1.2), 3, 5},
                            {testsupport::reference(3), 2, 5},
                            {testsupport::random_model(rng, 3), 3, 3},
                            {testsupport::reference(4), 2, 3}};
    for (const Case& c : cases) {
        const ModelParams p = make_params(1.1, 0.8);
        const SymmetricBasis b(c.atoms, c.model.levels, c.n_max);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(assemble_hamiltonian(c.model, p, b).to_dense(),
                                                          Eigen::EigenvaluesOnly);
        const Eigen::VectorXd oracle = symmetric_spectrum_oracle(c.model, p, c.atoms, c.n_max);
        REQUIRE(oracle.size() == es.eigenvalues().size());
        CHECK((oracle - es.eigenvalues()).cwiseAbs().maxCoeff() < 1e-11);
    }
}

TEST_CASE("decoupled spectrum")
{
    AtomModel m = testsupport::reference(3);
    m.d_matrix.setZero();
    const ModelParams p = make_params(1.0, 1.0);
    const SymmetricBasis b(4, 3, 6);
    const auto h = assemble_hamiltonian(m, p, b);
    for (const Triplet& t : h.lower) CHECK(t.row == t.col);
    std::vector<double> energies;
    for (int n = 0; n <= 6; ++n) {
        for (std::size_t a = 0; a < b.dim_atoms(); ++a) {
            const auto chi = b.occupation(a);
            energies.push_back(n + 2.0 * chi[1] + 3.0 * chi[2]);
        }
    }
    std::sort(energies.begin(), energies.end());
    const auto r = ground_and_gap(h, 2);
    CHECK(r.e0 == doctest::Approx(0.0).scale(1.0));
    CHECK(r.e1 == doctest::Approx(energies[1]));
    const auto ed = solve_ed(m, p, b);
    CHECK(ed.e0 == doctest::Approx(0.0).scale(1.0));
    CHECK(ed.gap == doctest::Approx(1.0));
    CHECK(ed.entropy == doctest::Approx(0.0).scale(1.0));
    CHECK(ed.photon_number == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("parity of basis states")
{
    const AtomModel m = testsupport::reference(3);  // parities + - +
    const SymmetricBasis b(3, 3, 2);
    for (int n = 0; n <= 2; ++n) {
        for (std::size_t a = 0; a < b.dim_atoms(); ++a) {
            const int expect = ((n + b.occupation(a)[1]) % 2 == 0) ? 1 : -1;
            CHECK(state_parity(m, b, n, a) == expect);
        }
    }
    // H conserves parity: every matrix element joins equal parities.
    const auto h = assemble_hamiltonian(m, make_params(1.0, 1.0), b);
    for (const Triplet& t : h.lower) {
        const int pr = state_parity(m, b, int(t.row / b.dim_atoms()), t.row % b.dim_atoms());
        const int pc = state_parity(m, b, int(t.col / b.dim_atoms()), t.col % b.dim_atoms());
        CHECK(pr == pc);
    }
}

TEST_CASE("entanglement entropy of engineered states")
{
    const SymmetricBasis b(2, 2, 3);
    Eigen::VectorXd bell = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(b.dim_total()));
    bell(b.state(0, 0)) = bell(b.state(1, 2)) = 1.0 / std::sqrt(2.0);
    CHECK(entanglement_entropy_ed(bell, b) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    const auto both = bipartite_entropies(bell, b);
    CHECK(both.photon_side == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(both.atom_side == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(photon_number(bell, b) == doctest::Approx(0.5));

    Eigen::VectorXd product = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(b.dim_total()));
    product(b.state(2, 0)) = 0.6;
    product(b.state(2, 1)) = 0.8;
    CHECK(entanglement_entropy_ed(product, b) == doctest::Approx(0.0).scale(1.0));
    CHECK(photon_number(product, b) == doctest::Approx(2.0));

    CHECK(shannon_entropy(Eigen::Vector2d(0.5, 0.5)) == doctest::Approx(std::log(2.0)));
    CHECK(shannon_entropy(Eigen::Vector3d(1.0, 0.0, 0.0)) == 0.0);
    CHECK_THROWS_AS(entanglement_entropy_ed(Eigen::VectorXd::Zero(3), b), InputError);
}

TEST_CASE("iterative and dense solvers agree on every instance up to dimension 400")
{
    int instances = 0;
    for (int order = 2; order <= 4; ++order) {
        for (int atoms = 1; atoms <= 6; ++atoms) {
            for (int n_max : {4, 9, 19, 39}) {
                const SymmetricBasis probe(atoms, order, n_max);
                if (probe.dim_total() > 400) continue;
                for (double h22 : {1.2, 2.0, 2.8}) {
                    const AtomModel m = with_level_energy(testsupport::reference(order), 1, h22);
                    const ModelParams p = make_params(1.0, 1.0);
                    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(assemble_hamiltonian(m, p, probe).to_dense(),
                                                                      Eigen::EigenvaluesOnly);
                    const auto ed = solve_ed(m, p, probe);
                    REQUIRE(ed.converged);
                    CHECK(std::abs(ed.e0 - es.eigenvalues()(0)) < 1e-10);
                    CHECK(std::abs(ed.e1 - es.eigenvalues()(1)) < 1e-10);
                    const auto dense = dense_sector_ground(m, p, probe, ed.ground_parity);
                    CHECK(std::abs(dense.first - ed.e0) < 1e-10);
                    CHECK(std::abs(entanglement_entropy_ed(dense.second, probe) - ed.entropy) < 1e-8);
                    const auto unresolved = ground_and_gap(assemble_hamiltonian(m, p, probe), 2);
                    CHECK(std::abs(unresolved.e0 - es.eigenvalues()(0)) < 1e-10);
                    CHECK(std::abs(unresolved.e1 - es.eigenvalues()(1)) < 1e-10);
                    ++instances;
                }
            }
        }
    }
    CHECK(instances > 30);
}

TEST_CASE("complex dipole is refused")
{
    AtomModel m = two_level(2.0);
    m.d_matrix(0, 1) = cplx(0.0, 1.0);
    m.d_matrix(1, 0) = cplx(0.0, -1.0);
    CHECK_THROWS_AS(assemble_hamiltonian(m, make_params(1.0, 1.0), SymmetricBasis(2, 2, 3)), InputError);
}

TEST_CASE("cutoff convergence")
{
    const AtomModel m = two_level(2.5);
    const ModelParams p = make_params(1.0, 1.0);
    const auto schedule = default_cutoff_schedule(m, p, 8);
    CHECK(schedule == std::vector<int>{16, 32, 64, 128});
    const auto super = default_cutoff_schedule(two_level(0.5), p, 64);
    CHECK(super.front() > 16);

    const CutoffReport rep = cutoff_convergence(m, p, 8, schedule);
    REQUIRE(rep.converged);
    CHECK(rep.converged_at == rep.steps[rep.steps.size() - 2].n_max);
    CHECK(rep.n_max == rep.steps.back().n_max);
    CHECK(std::abs(rep.steps.back().entropy - rep.steps[rep.steps.size() - 2].entropy) < 1e-8);

    const std::vector<int> bad{32, 16};
    CHECK_THROWS_AS(cutoff_convergence(m, p, 8, bad), InputError);
    const std::vector<int> tiny{2, 4};
    const CutoffReport loose = cutoff_convergence(two_level(1.0), p, 8, tiny);
    CHECK_FALSE(loose.converged);
}

TEST_CASE("critical-entropy search matches a brute-force scan")
{
    const AtomModel m = two_level(2.0);
    const ModelParams p = make_params(1.0, 1.0);
    CriticalSearchOptions opts;
    opts.lo = 0.3;
    opts.hi = 3.0;
    opts.n_max = 24;
    const CriticalEntropy ce = locate_critical_entropy(m, p, 2, opts);
    CHECK(ce.unimodal);

    const SymmetricBasis b(2, 2, 24);
    double best_x = 0.0, best_s = -1.0;
    for (int i = 0; i <= 2700; ++i) {
        const double x = 0.3 + 1e-3 * i;
        const double s = solve_ed(with_level_energy(m, 1, x), p, b).entropy;
        if (s > best_s) {
            best_s = s;
            best_x = x;
        }
    }
    CHECK(std::abs(ce.h_star - best_x) < 1e-3);
    CHECK(ce.s_cri >= best_s - 1e-12);
    CHECK(ce.s_cri - best_s < 1e-5);
    CHECK(ce.certified);

    CriticalSearchOptions bad = opts;
    bad.lo = 3.0;
    CHECK_THROWS_AS(locate_critical_entropy(m, p, 2, bad), InputError);
}

#include "mdicke/ed.hpp"

#include "mdicke/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mdicke {

SparseHamiltonian assemble_hamiltonian(const AtomModel& model, const ModelParams& params,
                                       const SymmetricBasis& basis)
{
    if (!model.is_real()) throw InputError("exact diagonalization requires a real dipole matrix");
    if (basis.levels() != model.levels) throw InputError("basis and model level counts differ");

    const int l = model.levels;
    const int nmax = basis.n_max();
    const std::size_t da = basis.dim_atoms();
    const Eigen::MatrixXd d = model.d_real();
    const double amp = params.g() / (2.0 * std::sqrt(static_cast<double>(basis.atoms())));

    SparseHamiltonian h;
    h.dimension = basis.dim_total();

    std::vector<int> moved(l);
    for (std::size_t a = 0; a < da; ++a) {
        const auto chi = basis.occupation(a);
        double atomic = 0.0;
        double dipole_diag = 0.0;
        for (int i = 0; i < l; ++i) {
            atomic += ModelParams::epsilon * model.h_diag[i] * chi[i];
            dipole_diag += d(i, i) * chi[i];
        }
        for (int n = 0; n <= nmax; ++n) {
            const double diag = params.omega * n + atomic;
            if (diag != 0.0) h.lower.push_back({basis.state(n, a), basis.state(n, a), diag});
        }

        // a^dag sum_k d^(k): row (n+1, chi^{i,j}) > col (n, chi) always.
        for (int n = 0; n < nmax; ++n) {
            const double ladder = amp * std::sqrt(static_cast<double>(n + 1));
            if (dipole_diag != 0.0) {
                h.lower.push_back({basis.state(n + 1, a), basis.state(n, a), ladder * dipole_diag});
            }
            for (int j = 0; j < l; ++j) {
                if (chi[j] == 0) continue;
                for (int i = 0; i < l; ++i) {
                    if (i == j || d(i, j) == 0.0) continue;
                    std::copy(chi.begin(), chi.end(), moved.begin());
                    moved[j] -= 1;
                    moved[i] += 1;
                    const std::size_t target = basis.index_of(moved);
                    const double elem = std::sqrt(static_cast<double>(chi[j]) * (chi[i] + 1)) * d(i, j);
                    h.lower.push_back({basis.state(n + 1, target), basis.state(n, a), ladder * elem});
                }
            }
        }
    }
    return h;
}

int state_parity(const AtomModel& model, const SymmetricBasis& basis, int photons, std::size_t atom_index)
{
    int p = (photons % 2 == 0) ? 1 : -1;
    const auto chi = basis.occupation(atom_index);
    for (int i = 0; i < model.levels; ++i) {
        if (model.parity_signs[i] < 0 && chi[i] % 2 != 0) p = -p;
    }
    return p;
}

double shannon_entropy(const Eigen::VectorXd& probabilities)
{
    double s = 0.0;
    for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
        const double p = probabilities(i);
        if (p > 0.0) s -= p * std::log(p);
    }
    return std::max(s, 0.0);
}

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajor> reshape(const Eigen::VectorXd& v, const SymmetricBasis& basis)
{
    if (static_cast<std::size_t>(v.size()) != basis.dim_total()) {
        throw InputError("state vector length does not match the basis");
    }
    return {v.data(), basis.n_max() + 1, static_cast<Eigen::Index>(basis.dim_atoms())};
}

}  // namespace

double entanglement_entropy_ed(const Eigen::VectorXd& ground, const SymmetricBasis& basis)
{
    const RowMajor m = reshape(ground, basis);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    const Eigen::VectorXd p = svd.singularValues().array().square();
    return shannon_entropy(p / p.sum());
}

BipartiteEntropies bipartite_entropies(const Eigen::VectorXd& ground, const SymmetricBasis& basis)
{
    const RowMajor m = reshape(ground, basis);
    const Eigen::MatrixXd rho_ph = m * m.transpose();
    const Eigen::MatrixXd rho_at = m.transpose() * m;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eph(rho_ph, Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eat(rho_at, Eigen::EigenvaluesOnly);
    return {shannon_entropy(eph.eigenvalues()), shannon_entropy(eat.eigenvalues())};
}

double photon_number(const Eigen::VectorXd& ground, const SymmetricBasis& basis)
{
    const auto m = reshape(ground, basis);
    double total = 0.0;
    for (int n = 0; n <= basis.n_max(); ++n) total += n * m.row(n).squaredNorm();
    return total / ground.squaredNorm();
}

EDResult ground_and_gap(const SparseHamiltonian& h, int k, const LanczosOptions& opts)
{
    const CsrMatrix csr = h.to_csr();
    const LanczosResult lr = lanczos_lowest(csr, k, opts);
    EDResult r;
    r.e0 = lr.pairs[0].value;
    r.e1 = k > 1 ? lr.pairs[1].value : std::numeric_limits<double>::quiet_NaN();
    r.gap = k > 1 ? std::max(0.0, r.e1 - r.e0) : std::numeric_limits<double>::quiet_NaN();
    r.ground = lr.pairs[0].vector;
    for (const auto& p : lr.pairs) r.residuals.push_back(p.residual);
    r.converged = lr.converged;
    r.matvecs = lr.matvecs;
    return r;
}

EDResult solve_ed(const AtomModel& model, const ModelParams& params, const SymmetricBasis& basis,
                  const EdOptions& opts)
{
    const CsrMatrix full = assemble_hamiltonian(model, params, basis).to_csr();

    std::vector<std::size_t> sector[2];
    for (int n = 0; n <= basis.n_max(); ++n) {
        for (std::size_t a = 0; a < basis.dim_atoms(); ++a) {
            sector[state_parity(model, basis, n, a) > 0 ? 0 : 1].push_back(basis.state(n, a));
        }
    }

    struct Level {
        double value;
        int sector;
        const Eigen::VectorXd* vector;
    };
    std::vector<Level> levels;
    LanczosResult solved[2];
    EDResult r;
    r.n_max = basis.n_max();
    r.converged = true;
    for (int s = 0; s < 2; ++s) {
        if (sector[s].empty()) continue;
        const CsrMatrix block = full.restrict_to(sector[s]);
        LanczosOptions lo = opts.lanczos;
        lo.seed += static_cast<std::uint64_t>(s);
        solved[s] = lanczos_lowest(block, std::min<int>(2, static_cast<int>(block.rows)), lo);
        r.converged = r.converged && solved[s].converged;
        r.matvecs += solved[s].matvecs;
        for (const auto& p : solved[s].pairs) {
            levels.push_back({p.value, s, &p.vector});
            r.residuals.push_back(p.residual);
        }
    }
    if (levels.size() < 2) throw InputError("solve_ed: basis too small for a gap");
    std::stable_sort(levels.begin(), levels.end(), [](const Level& a, const Level& b) { return a.value < b.value; });

    r.e0 = levels[0].value;
    r.e1 = levels[1].value;
    r.gap = std::max(0.0, r.e1 - r.e0);
    r.ground_parity = levels[0].sector == 0 ? 1 : -1;
    r.ground = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.dim_total()));
    const auto& idx = sector[levels[0].sector];
    for (std::size_t i = 0; i < idx.size(); ++i) r.ground(idx[i]) = (*levels[0].vector)(i);
    r.entropy = entanglement_entropy_ed(r.ground, basis);
    r.photon_number = photon_number(r.ground, basis);
    return r;
}

std::vector<int> default_cutoff_schedule(const AtomModel& model, const ModelParams& params, int atoms,
                                         int steps)
{
    const MeanFieldSolution mf = order_parameter(model, params.kappa);
    const double ratio = ModelParams::epsilon * mf.phi_star / params.g();
    const double scale = 4.0 * atoms * ratio * ratio;
    int n0 = std::max(16, static_cast<int>(std::ceil(scale)));
    std::vector<int> out;
    for (int s = 0; s < steps; ++s, n0 *= 2) out.push_back(n0);
    return out;
}

CutoffReport cutoff_convergence(const AtomModel& model, const ModelParams& params, int atoms,
                                std::span<const int> schedule, const EdOptions& opts,
                                const CutoffTolerances& tol, std::size_t mem_cap_bytes)
{
    for (std::size_t i = 1; i < schedule.size(); ++i) {
        if (schedule[i] <= schedule[i - 1]) throw InputError("cutoff schedule must be increasing");
    }
    CutoffReport rep;
    for (int n : schedule) {
        std::optional<SymmetricBasis> basis;
        try {
            basis.emplace(atoms, model.levels, n, mem_cap_bytes);
        } catch (const InputError&) {
            if (rep.steps.empty()) throw;
            break;
        }
        EDResult r = solve_ed(model, params, *basis, opts);
        CutoffStep step{n, r.entropy, r.gap, r.e0, r.photon_number, r.converged};
        if (!rep.steps.empty()) {
            const CutoffStep& prev = rep.steps.back();
            const bool s_ok = std::abs(step.entropy - prev.entropy) < tol.entropy;
            const bool g_ok = std::abs(step.gap - prev.gap) < tol.gap_rel * std::max(1.0, std::abs(step.gap));
            if (s_ok && g_ok && step.solver_converged && prev.solver_converged) {
                rep.converged = true;
                rep.converged_at = prev.n_max;
            }
        }
        rep.steps.push_back(step);
        rep.n_max = n;
        rep.result = std::move(r);
        if (rep.converged) break;
    }
    return rep;
}

namespace {

class EntropyProbe {
public:
    EntropyProbe(const AtomModel& tmpl, const ModelParams& params, int atoms, const CriticalSearchOptions& opts)
        : tmpl_(tmpl), params_(params), atoms_(atoms), opts_(opts)
    {
    }

    AtomModel at(double x) const { return with_level_energy(tmpl_, opts_.level, x); }

    double entropy(double x, int n_max)
    {
        ++evaluations;
        const SymmetricBasis basis(atoms_, tmpl_.levels, n_max, opts_.mem_cap_bytes);
        return solve_ed(at(x), params_, basis, opts_.ed).entropy;
    }

    CutoffReport certify(double x, int n_start)
    {
        std::vector<int> schedule;
        for (int n = n_start, s = 0; s < 4; ++s, n *= 2) schedule.push_back(n);
        CutoffReport rep = cutoff_convergence(at(x), params_, atoms_, schedule, opts_.ed, opts_.cutoff,
                                              opts_.mem_cap_bytes);
        evaluations += static_cast<int>(rep.steps.size());
        return rep;
    }

    int evaluations{0};

private:
    const AtomModel& tmpl_;
    ModelParams params_;
    int atoms_;
    const CriticalSearchOptions& opts_;
};

}  // namespace

CriticalEntropy locate_critical_entropy(const AtomModel& model_template, const ModelParams& params, int atoms,
                                        const CriticalSearchOptions& opts)
{
    if (!(opts.lo < opts.hi)) throw InputError("critical-entropy bracket must satisfy lo < hi");
    if (opts.prescan < 3) throw InputError("critical-entropy pre-scan needs at least 3 points");
    if (opts.level < 1 || opts.level >= model_template.levels) throw InputError("tuned level out of range");

    EntropyProbe probe(model_template, params, atoms, opts);
    CriticalEntropy out;

    int n_max = 0;
    if (opts.n_max) {
        n_max = *opts.n_max;
    } else {
        const double mid = 0.5 * (opts.lo + opts.hi);
        const auto schedule = default_cutoff_schedule(probe.at(mid), params, atoms, 1);
        const CutoffReport rep = probe.certify(mid, schedule.front());
        n_max = rep.converged ? rep.converged_at : rep.n_max;
    }

    const int np = opts.prescan;
    int best = 0;
    for (int i = 0; i < np; ++i) {
        const double x = opts.lo + (opts.hi - opts.lo) * i / (np - 1);
        out.prescan.emplace_back(x, probe.entropy(x, n_max));
        if (out.prescan[i].second > out.prescan[best].second) best = i;
    }
    // Unimodal: non-decreasing up to the argmax, non-increasing after it.
    const double slack = 1e-12;
    for (int i = 0; i < np - 1; ++i) {
        const double step = out.prescan[i + 1].second - out.prescan[i].second;
        if ((i < best && step < -slack) || (i >= best && step > slack)) out.unimodal = false;
    }
    if (!out.unimodal || best == 0 || best == np - 1) {
        out.unimodal = out.unimodal && best != 0 && best != np - 1;
        out.h_star = out.prescan[best].first;
        out.s_cri = out.prescan[best].second;
        out.n_max = n_max;
        out.evaluations = probe.evaluations;
        return out;
    }

    if (!opts.n_max) {
        const CutoffReport rep = probe.certify(out.prescan[best].first, n_max);
        n_max = std::max(n_max, rep.converged ? rep.converged_at : rep.n_max);
    }

    // Golden section on the bracketing grid cell pair.
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = out.prescan[best - 1].first;
    double b = out.prescan[best + 1].first;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = probe.entropy(c, n_max);
    double fd = probe.entropy(d, n_max);
    while (b - a > opts.tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = probe.entropy(c, n_max);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = probe.entropy(d, n_max);
        }
    }
    out.h_star = fc > fd ? c : d;
    out.s_cri = std::max(fc, fd);
    out.n_max = n_max;

    // Final cutoff check at the maximizer.
    const std::vector<int> check{n_max, 2 * n_max};
    const CutoffReport rep = cutoff_convergence(probe.at(out.h_star), params, atoms, check, opts.ed,
                                                opts.cutoff, opts.mem_cap_bytes);
    probe.evaluations += static_cast<int>(rep.steps.size());
    out.certified = rep.converged;
    out.evaluations = probe.evaluations;
    return out;
}

}  // namespace mdicke

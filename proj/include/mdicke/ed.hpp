// ed.hpp: exact diagonalization of the finite-N Hamiltonian
//
//   H = omega a^dag a + g (a + a^dag) / (2 sqrt N) sum_k d^(k) + eps sum_k h^(k)
//
// in the symmetric atomic subspace with a photon cutoff. Solves are resolved
// by the global parity (-1)^n prod_i p_i^chi_i, which H conserves.

#pragma once

#include "mdicke/basis.hpp"
#include "mdicke/lanczos.hpp"
#include "mdicke/model.hpp"
#include "mdicke/sparse.hpp"

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace mdicke {

// Requires a real dipole matrix (InputError otherwise).
SparseHamiltonian assemble_hamiltonian(const AtomModel& model, const ModelParams& params,
                                       const SymmetricBasis& basis);

// +1 / -1 for basis state |photons> (x) |chi_atom_index>.
int state_parity(const AtomModel& model, const SymmetricBasis& basis, int photons, std::size_t atom_index);

struct EDResult {
    double e0{0.0};
    double e1{0.0};
    double gap{0.0};
    Eigen::VectorXd ground;       // full-space vector, basis.state() ordering
    double entropy{0.0};          // atom-photon von Neumann entropy
    double photon_number{0.0};    // <a^dag a>
    int n_max{0};
    std::vector<double> residuals;
    int ground_parity{0};         // 0 when the solve was not parity resolved
    bool converged{false};
    long matvecs{0};
};

// Lowest k eigenpairs of H without symmetry resolution. Entropy and photon
// number are left at zero; they need the basis.
EDResult ground_and_gap(const SparseHamiltonian& h, int k = 2, const LanczosOptions& opts = {});

struct EdOptions {
    // Parity resolution removes the symmetry doublets, and exact degeneracies
    // inside a sector are non-generic, so the complement probe is skipped.
    LanczosOptions lanczos{.verify = false};
};

// Parity-resolved ground state and gap, with entropy and photon number.
EDResult solve_ed(const AtomModel& model, const ModelParams& params, const SymmetricBasis& basis,
                  const EdOptions& opts = {});

// Reshape into (n_max + 1) x dim_atoms and take the Schmidt spectrum.
double entanglement_entropy_ed(const Eigen::VectorXd& ground, const SymmetricBasis& basis);

struct BipartiteEntropies {
    double photon_side{0.0};
    double atom_side{0.0};
};

// Both reduced density matrices diagonalized separately.
BipartiteEntropies bipartite_entropies(const Eigen::VectorXd& ground, const SymmetricBasis& basis);

double photon_number(const Eigen::VectorXd& ground, const SymmetricBasis& basis);

// -sum p ln p over p > 0.
double shannon_entropy(const Eigen::VectorXd& probabilities);

struct CutoffStep {
    int n_max{0};
    double entropy{0.0};
    double gap{0.0};
    double e0{0.0};
    double photon_number{0.0};
    bool solver_converged{false};
};

struct CutoffReport {
    std::vector<CutoffStep> steps;
    bool converged{false};
    int converged_at{0};  // first cutoff whose successor agreed
    int n_max{0};         // cutoff carried by the certified values
    EDResult result;      // solve at n_max
};

struct CutoffTolerances {
    double entropy{1e-8};
    double gap_rel{1e-10};  // relative to max(1, |gap|)
};

// Mean-field photon scale: max(16, ceil(4 N (phi*/g)^2)), then doublings.
std::vector<int> default_cutoff_schedule(const AtomModel& model, const ModelParams& params, int atoms,
                                         int steps = 4);

// Recompute S and the gap along an increasing cutoff schedule and stop at the
// first agreeing pair. Runs that hit the memory cap end the schedule early.
CutoffReport cutoff_convergence(const AtomModel& model, const ModelParams& params, int atoms,
                                std::span<const int> schedule, const EdOptions& opts = {},
                                const CutoffTolerances& tol = {},
                                std::size_t mem_cap_bytes = std::size_t{8} << 30);

struct CriticalSearchOptions {
    double lo{1.0};
    double hi{3.0};
    int prescan{32};
    double tol{1e-6};
    std::optional<int> n_max;  // fixed cutoff; otherwise certified automatically
    int level{1};              // tuned level energy (0-based); 1 is h22
    EdOptions ed;
    CutoffTolerances cutoff;
    std::size_t mem_cap_bytes{std::size_t{8} << 30};
};

struct CriticalEntropy {
    double h_star{0.0};
    double s_cri{0.0};
    int n_max{0};
    bool certified{false};
    bool unimodal{true};
    int evaluations{0};
    std::vector<std::pair<double, double>> prescan;
};

// Maximize the ED entropy over one level energy: coarse pre-scan, golden
// section around the best grid point, then a cutoff check at 2 n_max.
CriticalEntropy locate_critical_entropy(const AtomModel& model_template, const ModelParams& params,
                                        int atoms, const CriticalSearchOptions& opts = {});

}  // namespace mdicke

// model.hpp: atom model, coupling parameters, and validation for the
// multi-level Dicke Hamiltonian.
//
// Energies are measured in units of the atomic scale epsilon (fixed to 1).
// The atomic Hamiltonian h is stored by its eigenvalues; the dipole operator
// d is a dense Hermitian matrix in the same basis.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdicke {

using cplx = std::complex<double>;

// Bad user input: malformed model files, invalid parameters. CLI exit code 2.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A solver could not deliver a certified answer. CLI exit code 1.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AtomModel {
    int levels{0};
    std::vector<double> h_diag;       // h_diag[0] = 0, others > 0
    Eigen::MatrixXcd d_matrix;        // Hermitian, connects opposite parity only
    std::vector<int> parity_signs;    // +1 / -1

    // True when every entry of d has |Im| <= tol.
    bool is_real(double tol = 1e-14) const;
    Eigen::MatrixXd d_real() const { return d_matrix.real(); }
    double max_h() const;
};

struct ModelParams {
    static constexpr double epsilon = 1.0;

    double omega{1.0};   // photon frequency
    double kappa{1.0};   // omega * epsilon / g^2

    double g() const;
};

// Throws InputError unless omega > 0 and kappa > 0.
ModelParams make_params(double omega, double kappa);

// Tridiagonal coupling scheme: only d_{k,k-1} nonzero, alternating parity.
struct TClassModel {
    int levels{0};
    std::vector<double> h_diag;
    std::vector<double> couplings;  // |d_{k,k-1}|, size levels-1

    AtomModel expand() const;
};

struct Violation {
    std::string kind;          // "shape", "energy", "hermiticity", "z2", "parity"
    std::vector<int> indices;  // offending (0-based) indices
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

ValidationReport validate(const AtomModel& model, double tol = 1e-12);

// Number of independently tunable parameters for an l-level atom whose
// parity operator has (l + delta)/2 positive eigenvalues.
int tunable_parameter_count(int levels, int delta);

struct ReferenceModel {
    TClassModel model;
    ModelParams params;
};

// The cavity-assisted Raman scheme with couplings (√2, √3, √3, √2) and
// level energies (0, 2, 3, 3, 2), truncated to `order` levels. At kappa = 1
// it sits exactly on the critical point of the given order.
ReferenceModel raman_scheme_model(int order);

// Recognize a tridiagonal model with alternating parity; couplings are the
// moduli of the sub-diagonal.
std::optional<TClassModel> as_tclass(const AtomModel& model, double tol = 1e-14);

// Parity assignment from the coupling graph by two-coloring (level 0 gets +1).
// Edges that contradict the coloring are left for validate() to report.
std::vector<int> infer_parity(const Eigen::MatrixXcd& d, double tol = 1e-14);

// Parse "h22", "h33", ... into a 0-based level index. Throws InputError.
int parse_level_name(const std::string& name, int levels);

// Copy of `model` with h_diag[level] replaced.
AtomModel with_level_energy(const AtomModel& model, int level, double value);
TClassModel with_level_energy(const TClassModel& model, int level, double value);

std::uint64_t model_hash(const AtomModel& model, const ModelParams& params);

}  // namespace mdicke

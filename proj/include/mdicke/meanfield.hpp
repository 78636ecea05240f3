// meanfield.hpp: mean-field energy surface, order parameter, Landau
// coefficients and criticality conditions.
//
// The mean-field single-atom matrix is  kappa*phi^2 + phi*d + h  (units of
// epsilon); its lowest eigenvalue e1(phi) is the mean-field ground energy per
// atom. e1 is even in phi and e1(0) = 0.

#pragma once

#include "mdicke/model.hpp"

#include <optional>
#include <vector>

namespace mdicke {

enum class Phase { Normal, Superradiant };
enum class TransitionOrder { FirstOrder, SecondOrder };

const char* to_string(Phase p);
const char* to_string(TransitionOrder t);

struct MeanFieldSolution {
    double phi_star{0.0};  // >= 0; the Z2 partner is -phi_star
    double energy{0.0};    // minimized e1, <= 0
    Phase phase{Phase::Normal};
    std::optional<TransitionOrder> transition_order_hint;  // boundary queries only
};

struct LandauCoefficients {
    std::vector<double> c;          // c[0..max_order]
    double max_odd_correction{0.0}; // largest |E^(2k+1)|, must vanish by symmetry
};

struct MeanFieldOptions {
    int grid_points{200};
    int max_doublings{6};
    double zero_phi_tol{1e-6};
    double energy_tie_rel{1e-12};
};

// Lowest eigenpair of the mean-field matrix at fixed kappa. Picks a real
// solver when d is real.
class MeanFieldMatrix {
public:
    MeanFieldMatrix(const AtomModel& model, double kappa);

    double ground_energy(double phi) const;
    // d e1 / d phi by Hellmann-Feynman; equals <1|D|1> with D = d + 2 kappa phi.
    double slope(double phi) const;
    // All eigenvalues (ascending) and eigenvectors as columns.
    void eigensystem(double phi, Eigen::VectorXd& values, Eigen::MatrixXcd& vectors) const;

    double kappa() const { return kappa_; }
    const AtomModel& model() const { return model_; }

private:
    AtomModel model_;
    double kappa_;
    bool real_;
    Eigen::MatrixXd d_re_;
};

double ground_energy(const AtomModel& model, double kappa, double phi);

MeanFieldSolution order_parameter(const AtomModel& model, double kappa,
                                  const MeanFieldOptions& opts = {});

// Rayleigh-Schrodinger series of e1 in powers of phi with h unperturbed.
// c[1] = kappa + E^(2), c[k] = E^(2k) for k >= 2.
LandauCoefficients landau_coefficients(const AtomModel& model, double kappa, int max_order);

// kappa - sum_k |d_1k|^2 / h_kk ; equals c[1], zero on the critical manifold.
double ordinary_critical_residual(const AtomModel& model, double kappa);

// Fourth-order condition as a difference (left sum minus right sum):
//   sum d1a dab dbc dc1 / (ha hb hc)  -  sum |d1a|^2 |d1b|^2 / (ha^2 hb)
// Its zero set is the c2 = 0 manifold; numerically c2 = -c2_residual.
double c2_residual(const AtomModel& model, double kappa);

// Largest n such that |d_{k,k-1}|^2 = kappa h_kk for all 2 <= k <= n
// (1-based levels), within relative tolerance. 1 means not critical.
int tclass_criticality_order(const TClassModel& model, double kappa, double tol = 1e-9);

struct ZetaPolynomial {
    double value{0.0};                 // zeta_l(phi)
    std::vector<double> coefficients;  // in powers of phi^2
    int lowest_power{-1};              // lowest nonvanishing power of phi
};

// Determinant of the tridiagonal mean-field matrix via the three-term
// recurrence, both as a number and as an exact polynomial in phi^2.
ZetaPolynomial tclass_determinant(const TClassModel& model, double kappa, double phi,
                                  double tol = 1e-10);

}  // namespace mdicke

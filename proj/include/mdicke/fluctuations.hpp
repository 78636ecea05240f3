// fluctuations.hpp: Gaussian (large-N) fluctuations about the mean-field
// state: normal modes, atom-photon entanglement entropy, photon fluctuation
// and excited-mode depletion.
//
// The quadratic Hamiltonian is
//   H_eff = w b'b + sum_i [ w_i b_i'b_i + (g/2)|D_1i| (b + b')(b_i + b_i') ]
// with D = d + 2 kappa phi taken in the mean-field eigenbasis. Written as
// (1/2)(P.P + X.Omega^2.X), the frequency matrix has
//   Omega^2_11 = w^2, Omega^2_kk = w_k^2, Omega^2_1k = g |D_1k| sqrt(w w_k).

#pragma once

#include "mdicke/meanfield.hpp"

#include <vector>

namespace mdicke {

struct FluctuationInput {
    double phi{0.0};
    double d11{0.0};                     // <1|D|1>, zero at a stationary phi
    std::vector<double> coupling;        // |D_1k| of the bright modes
    std::vector<double> excitation;      // w_k of the bright modes, strictly increasing
    std::vector<double> dark_excitation; // decoupled modes removed before the solve
};

// Solves the mean-field problem and expands about phi*.
FluctuationInput build_fluctuation_input(const AtomModel& model, const ModelParams& params);

// Expansion about a prescribed phi (e.g. the normal branch phi = 0 beyond
// the critical point). Throws InputError when the mean-field ground level is
// degenerate.
FluctuationInput fluctuation_input_at(const AtomModel& model, const ModelParams& params, double phi);

Eigen::MatrixXd build_omega_sq(const FluctuationInput& input, double omega, double g);

struct SecularRoots {
    std::vector<double> lambda_sq;  // ascending
    bool valid{true};               // false when lambda_1^2 < 0
};

// Roots of q(x) = w^2 - x + g^2 w sum |D_1k|^2 w_k / (x - w_k^2), one per
// interleaving bracket, by bisection.
SecularRoots secular_roots(const FluctuationInput& input, double omega, double g);
double secular_function(const FluctuationInput& input, double omega, double g, double x);

struct FluctuationSpectrum {
    Eigen::MatrixXd omega_sq;     // Omega^2
    Eigen::MatrixXd omega_root;   // principal square root Omega (valid spectra only)
    std::vector<double> lambdas;  // normal-mode frequencies, ascending; NaN when unstable
    std::vector<double> lambda_sq;
    double det_omega{0.0};
    double omega_11{0.0};
    double minor_11{0.0};
    double photon_omega{1.0};
    bool valid{true};
    double gamma{0.0};
    double entropy{0.0};
    bool divergent{false};
    double gap{0.0};
    double photon_fluct{0.0};
    double depletion{0.0};
};

struct EntropyResult {
    double gamma{0.0};
    double entropy{0.0};
    bool divergent{false};  // det Omega = 0: S = +inf
};

// Builds Omega^2, its roots, the square root and all observables.
FluctuationSpectrum fluctuation_spectrum(const FluctuationInput& input, const ModelParams& params);

EntropyResult entanglement_entropy(const FluctuationSpectrum& spectrum);

// S(gamma) = gamma/(e^gamma - 1) - ln(1 - e^-gamma); 1 - ln gamma + gamma^2/24
// for gamma < 1e-6.
double entropy_from_gamma(double gamma);

// <(b' + b)^2> = w M_11 / det Omega; +inf at criticality.
double photon_fluctuation(const FluctuationSpectrum& spectrum);

// sum over atomic modes of <b_i' b_i> in the Gaussian ground state.
double depletion(const FluctuationSpectrum& spectrum, const FluctuationInput& input);

}  // namespace mdicke

#pragma once

#include <vector>

#include "qdual/grid.hpp"
#include "qdual/linalg.hpp"

namespace qdual {

// Interaction-picture (full propagator) versus Schroedinger picture (the
// e^{i(omega0/2) sigma3 t} prefactor stripped off).
enum class Picture { interaction, schroedinger };

// Two-level atom in a monochromatic laser field of constant amplitude,
// basis |2> = (1,0) upper, |1> = (0,1) lower.
struct HhgParams {
    double omega0 = 0.1;  // level splitting
    double omegaL = 1.0;  // laser frequency
    double field = 0.75;  // field amplitude Omega
    double dipole = 1.0;  // dipole matrix element d12

    double z_half() const { return field * dipole / omegaL; }  // argument in U0
    double z() const { return 2.0 * field * dipole / omegaL; } // Bessel argument
};

// Initial bare-level amplitudes (c2 upper, c1 lower).
struct Populations {
    cplx c1;
    cplx c2;
};

// Bessel function J_order(z) of integer order, z >= 0, order <= 64.
// Ascending power series for z <= 12, downward recurrence beyond.
double bessel_j(int order, double z);

// Renormalized level separation omega0 * J_0(z).
double renormalized_gap(const HhgParams& p);

// Max-norm residual of exp(i sigma1 z sin(phi)) against its truncated Bessel
// expansion J0 + 2 sum J_{2n} cos(2n phi) + 2i sigma1 sum J_{2n+1} sin((2n+1) phi).
double bessel_identity_residual(double z, double phi, int cutoff);

// Interaction-picture Hamiltonian: off-diagonal Omega d12 cos(omegaL t) e^{+/- i omega0 t}.
Operator hhg_interaction_hamiltonian(const HhgParams& p, double t);

// Leading (adiabatic/dressed) propagator
// e^{i (omega0/2) sigma3 t} e^{-i sigma1 z_half sin(omegaL t)};
// the Schroedinger picture drops the first factor.
Operator hhg_leading_propagator(const HhgParams& p, double t,
                                Picture pic = Picture::interaction);

// Transformed Hamiltonian of the dual expansion:
// (omega0/2) e^{i sigma1 Theta} sigma3 e^{-i sigma1 Theta}, Theta = z_half sin(omegaL t).
Operator hhg_dual_hamiltonian(const HhgParams& p, double t);

// First-order dual state. Unrenormalized keeps the t-linear secular term
// -i (omega0/2) J0(z) t sigma3 inside the bracket; renormalized exponentiates
// it onto the initial state as e^{-i (omega0/2) J0(z) t sigma3} instead.
StateVector hhg_state_first_order(const HhgParams& p, const Populations& init, double t,
                                  bool renormalized, Picture pic = Picture::schroedinger);

// Closed-form dipole signal x(t) split into its three line families.
struct DipoleSignal {
    std::vector<double> total;    // x(t)
    std::vector<double> carrier;  // the omega0R Rabi-like line
    std::vector<double> odd;      // odd-harmonic comb
    std::vector<double> hyper;    // hyper-Raman sidebands
};

// x(t) = -d12 [ 2 Re K + (|c1|^2-|c2|^2) omega0 sum J_{2n+1}(z)(cos((2n+1) wL t)-1)/((n+1/2) wL)
//               - 2 Im K * omega0 sum J_{2n}(z) sin(2n wL t)/(n wL) ],
// K(t) = c2* c1 e^{i omega0R t}.
std::vector<double> dipole_expectation(const HhgParams& p, const Populations& init,
                                       const TimeGrid& grid);
DipoleSignal dipole_components(const HhgParams& p, const Populations& init, const TimeGrid& grid);

// Max difference between the closed-form x(t) and <Psi|(-d12 sigma1)|Psi> with
// Psi the renormalized first-order state; reports the quadratic remainder.
double dipole_expectation_crosscheck(const HhgParams& p, const Populations& init,
                                     const TimeGrid& grid, Picture pic = Picture::schroedinger);

}  // namespace qdual

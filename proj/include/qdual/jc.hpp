#pragma once

#include <utility>

#include "qdual/linalg.hpp"

namespace qdual {

// Two-level atom coupled to one field mode (rotating-wave approximation),
// restricted to the n-photon sector spanned by (|1,n+1>, |2,n>).
struct JcParams {
    double omega = 1.0;   // field frequency
    double omega0 = 1.5;  // level splitting
    double g = 0.1;       // coupling
    int n = 0;            // photon number of the sector

    double delta() const { return omega0 - omega; }
    double rabi() const { return 2.0 * g * std::sqrt(static_cast<double>(n) + 1.0); }
    double big_omega() const { return std::hypot(delta(), rabi()); }
    // expansion parameter R_n / Delta
    double lambda() const;
};

struct JcAmplitudes {
    cplx c1;  // amplitude of |1,n+1>
    cplx c2;  // amplitude of |2,n>

    double norm() const { return std::sqrt(std::norm(c1) + std::norm(c2)); }
};

// Exact sector evolution of the initial amplitudes to time t.
JcAmplitudes jc_exact(const JcParams& p, const JcAmplitudes& init, double t);

// Interaction-picture sector Hamiltonian: off-diagonal g sqrt(n+1) e^{-/+ i Delta t}.
Operator jc_sector_hamiltonian(const JcParams& p, double t);

// Dressed states (a, b) with eigenvalues +g sqrt(n+1) and -g sqrt(n+1):
// |a> = (e^{-i Delta t}, 1)/sqrt(2), |b> = (1, -e^{i Delta t})/sqrt(2).
std::pair<StateVector, StateVector> jc_dressed_states(const JcParams& p, double t);

// Truncation of the small-lambda (Dyson) expansion at `order` in {0,1,2}.
// With `resummed`, the t-linear secular term is absorbed into the oscillation
// frequency: cos/sin arguments use Delta + R^2/(2 Delta) instead of Delta,
// prefactors keep their order-k values. Requires Delta != 0.
JcAmplitudes jc_dyson_closed(const JcParams& p, const JcAmplitudes& init, double t, int order,
                             bool resummed);

// Truncation of the large-lambda (dual) expansion at `order` in {0,1,2}.
// Order 0 is the dressed-state propagator U0; orders 1 and 2 add the U1, U2
// corrections. Requires R != 0.
JcAmplitudes jc_dual_closed(const JcParams& p, const JcAmplitudes& init, double t, int order);

}  // namespace qdual

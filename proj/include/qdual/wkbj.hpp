#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "qdual/linalg.hpp"

namespace qdual {

// psi'' + alpha(x)^2 psi = 0 recast as the first-order system
// i d/dx (psi, phi) = L(x) (psi, phi), L = i [[0, 1], [-alpha^2, 0]],
// with phi = psi'. alpha must stay positive on [x0, x1].
struct WkbjProblem {
    std::function<double(double)> alpha;
    double x0 = 0.0;
    double x1 = 1.0;
    cplx psi0;
    cplx phi0;
};

// (C1 cos(Phi) + C2 sin(Phi)) / sqrt(alpha(x)), Phi = int_{x0}^x alpha,
// C1 = sqrt(alpha(x0)) psi0, C2 = phi0 / sqrt(alpha(x0)).
cplx wkbj_closed(const WkbjProblem& problem, double x);

// Adiabatic propagator for the first-order system,
// (1/sqrt(alpha(x) alpha0)) [[alpha0 cos(Phi), sin(Phi)],
//                            [-alpha(x) alpha0 sin(Phi), alpha(x) cos(Phi)]].
Operator wkbj_matrix_propagator(const WkbjProblem& problem, double x);

// Adaptive Runge-Kutta oracle for (psi, phi) at x; local error tolerance tol.
std::pair<cplx, cplx> reference_solve(const WkbjProblem& problem, double x, double tol);

// One integration pass sampled at ascending points xs (each >= x0).
std::vector<std::pair<cplx, cplx>> reference_solve_samples(const WkbjProblem& problem,
                                                           const std::vector<double>& xs,
                                                           double tol);

// Berry connections <l_n|i d/dx|r_n> of the two L(x) eigenvector branches
// (biorthogonal left/right pairs, centered finite differences on a uniform
// grid of the given size); analytically zero for this system.
std::vector<std::vector<cplx>> wkbj_berry_connections(const WkbjProblem& problem,
                                                      std::size_t samples);

}  // namespace qdual

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "qdual/grid.hpp"
#include "qdual/linalg.hpp"

namespace qdual {

using OperatorFn = std::function<Operator(double)>;

// One time sample of the instantaneous eigenproblem H(t)|n,t> = E_n(t)|n,t>.
// Branches keep their identity across nodes by maximal-overlap continuation,
// so `energies` follow smooth curves (they may cross zero gaps are checked).
struct EigenFrame {
    double time = 0.0;
    std::vector<double> energies;
    std::vector<StateVector> vectors;
    std::vector<double> berry_connection;  // <n,t| i d/dt |n,t>
};

// Partial sums of a propagator expansion sampled on a grid:
// orders[k][j] is the sum through perturbative order k at grid node j.
struct PropagatorSeries {
    TimeGrid grid;
    std::vector<std::vector<Operator>> orders;

    const Operator& at(std::size_t order, std::size_t node) const { return orders[order][node]; }
    const Operator& final(std::size_t order) const { return orders[order].back(); }
};

// t -> exp(i H0 t) V(t) exp(-i H0 t). H0 must be Hermitian and constant.
OperatorFn interaction_picture(const Operator& h0, OperatorFn v);

// Time-ordered (Dyson) expansion of the propagator of H through `order` <= 4,
// by the recursive running-integral trapezoid quadrature on the grid.
// If refine_tol > 0, the result is recomputed on a doubled grid and
// GridTooCoarse is thrown when any node entry moves by more than refine_tol.
PropagatorSeries dyson_propagate(const OperatorFn& h, const TimeGrid& grid, int order,
                                 double refine_tol = 0.0);

// Instantaneous eigenframes of H over the grid, gauge-fixed and continued.
// degeneracy_tol < 0 selects the default 1e-8 * max|E| over the grid.
std::vector<EigenFrame> instantaneous_frames(const OperatorFn& h, const TimeGrid& grid,
                                             double degeneracy_tol = -1.0);

// Cumulative trapezoid integral of each branch's Berry connection: [branch][node].
std::vector<std::vector<double>> berry_phases(const std::vector<EigenFrame>& frames);

// Adiabatic propagator per node:
// U_A(t) = sum_n exp(i gamma_n(t) - i int E_n dt') |n,t><n,t0|.
std::vector<Operator> adiabatic_propagator(const std::vector<EigenFrame>& frames);

// Transformed Hamiltonian driving the corrections to U_A, per node:
// H'(t) = -sum_{n != m} e^{-i(gamma_m - gamma_n)} e^{i int(E_m - E_n)}
//         <m,t| i d/dt |n,t> |m,t0><n,t0|.
std::vector<Operator> dual_hamiltonian(const std::vector<EigenFrame>& frames);

// Dual (adiabatic) expansion through `order` <= 2:
// orders[k](t) = U_A(t) * [Dyson partial sum of H' through order k](t).
PropagatorSeries dual_dyson_propagate(const OperatorFn& h, const TimeGrid& grid, int order);

// One superadiabatic iteration step: the adiabatic propagator of the current
// Hamiltonian and the transformed Hamiltonian it hands to the next step.
struct SuperadiabaticStep {
    std::vector<Operator> u_a;     // U_A^{(k)} per node
    std::vector<Operator> h_next;  // H^{(k)} per node
    double residual_norm = 0.0;    // max over nodes of max-entry of H^{(k)}
};

struct SuperadiabaticChain {
    std::vector<SuperadiabaticStep> steps;
    bool involution = false;        // U_A^{(k)} == (U_A^{(k-1)})^dagger detected
    std::size_t involution_step = 0;  // 1-based step index where it was detected
};

// Repeats frames -> adiabatic propagator -> transformed Hamiltonian up to
// `steps` times, stopping early when the residual Hamiltonian vanishes or the
// chain turns into an involution (each further step undoes the previous one).
SuperadiabaticChain superadiabatic_iterate(const OperatorFn& h, const TimeGrid& grid, int steps,
                                           double involution_tol = 1e-5);

}  // namespace qdual

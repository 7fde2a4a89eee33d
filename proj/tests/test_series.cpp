#include <cmath>
#include <vector>

#include "doctest.h"
#include "qdual/hhg.hpp"
#include "qdual/jc.hpp"
#include "qdual/ode.hpp"
#include "qdual/series.hpp"

using namespace qdual;

namespace {

// propagator columns from the adaptive ODE integrator, i dU/dt = H(t) U
Operator ode_propagator(const OperatorFn& h, double t0, double t1, double tol = 1e-11) {
    const std::size_t n = h(t0).dim();
    const OdeRhs rhs = [&h](double t, const std::vector<cplx>& y, std::vector<cplx>& dy) {
        const Operator ht = h(t);
        const std::size_t d = ht.dim();
        for (std::size_t r = 0; r < d; ++r) {
            cplx s = 0.0;
            for (std::size_t c = 0; c < d; ++c) s += ht(r, c) * y[c];
            dy[r] = cplx(0.0, -1.0) * s;
        }
    };
    Operator u(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::vector<cplx> y(n);
        y[col] = 1.0;
        y = ode_integrate(rhs, t0, t1, y, tol, tol * 1e-2);
        for (std::size_t r = 0; r < n; ++r) u(r, col) = y[r];
    }
    return u;
}

Operator taylor_exp(const Operator& h, double t, int terms) {
    Operator sum = Operator::identity(h.dim());
    Operator pw = Operator::identity(h.dim());
    double fact = 1.0;
    for (int k = 1; k <= terms; ++k) {
        pw = pw * h;
        fact *= k;
        sum += (std::pow(cplx(0.0, -t), k) / fact) * pw;
    }
    return sum;
}

OperatorFn smooth_two_level() {
    return [](double t) {
        Operator h = pauli(3);
        h += cplx(0.3 * std::cos(0.2 * t), 0.0) * pauli(1);
        h += cplx(0.2 * std::sin(0.2 * t), 0.0) * pauli(2);
        return h;
    };
}

}  // namespace

TEST_CASE("dyson partial sums on a constant Hamiltonian match the Taylor truncation") {
    const Operator h0 = cplx(0.4, 0.0) * pauli(1) + cplx(0.25, 0.0) * pauli(3);
    const OperatorFn h = [h0](double) { return h0; };
    const TimeGrid grid(0.0, 2.0, 4001);
    const auto series = dyson_propagate(h, grid, 4);
    for (int k = 0; k <= 4; ++k)
        CHECK(max_abs_diff(series.final(k), taylor_exp(h0, 2.0, k)) < 2e-6);
}

TEST_CASE("dyson order 4 approaches the exact propagator") {
    const OperatorFn h = [](double t) {
        return cplx(0.2 * std::cos(t), 0.0) * pauli(1) + cplx(0.1, 0.0) * pauli(3);
    };
    const TimeGrid grid(0.0, 1.5, 2001);
    const auto series = dyson_propagate(h, grid, 4);
    const Operator exact = ode_propagator(h, 0.0, 1.5);
    // coupling * span ~ 0.45, so the order-4 remainder sits near 0.45^5/5!
    CHECK(max_abs_diff(series.final(4), exact) < 2e-4);
    CHECK(max_abs_diff(series.final(2), exact) < 2e-2);
    CHECK_THROWS_AS(dyson_propagate(h, grid, 5), BadIndex);
    CHECK_THROWS_AS(dyson_propagate(h, grid, -1), BadIndex);
}

TEST_CASE("dyson refinement guard flags coarse grids") {
    const OperatorFn h = [](double t) { return cplx(std::cos(3.0 * t), 0.0) * pauli(1); };
    CHECK_THROWS_AS(dyson_propagate(h, TimeGrid(0.0, 3.0, 9), 2, 1e-8), GridTooCoarse);
    CHECK_NOTHROW(dyson_propagate(h, TimeGrid(0.0, 3.0, 8193), 2, 1e-6));
}

TEST_CASE("interaction picture transform") {
    const Operator h0 = cplx(0.5, 0.0) * pauli(3);
    const OperatorFn v = [](double) { return pauli(1); };
    const OperatorFn vi = interaction_picture(h0, v);
    // e^{i H0 t} sigma1 e^{-i H0 t} rotates the off-diagonals by e^{+/- i t}
    const double t = 1.3;
    const Operator w = vi(t);
    CHECK(std::abs(w(0, 1) - std::exp(cplx(0.0, t))) < 1e-12);
    CHECK(std::abs(w(1, 0) - std::exp(cplx(0.0, -t))) < 1e-12);
    CHECK(std::abs(w(0, 0)) < 1e-12);
    CHECK_THROWS_AS(interaction_picture(pauli(1) * pauli(3), v), NotHermitian);
}

TEST_CASE("instantaneous frames of the sector Hamiltonian") {
    const JcParams p{1.0, 2.0, 0.35, 0};  // delta 1, rabi 0.7
    const OperatorFn h = [&p](double t) { return jc_sector_hamiltonian(p, t); };
    const TimeGrid grid(0.0, 2.0, 1025);
    const auto frames = instantaneous_frames(h, grid);

    const double gn = 0.35;
    for (std::size_t j = 0; j < grid.samples; j += 128) {
        CHECK(frames[j].energies[0] == doctest::Approx(-gn).epsilon(1e-10));
        CHECK(frames[j].energies[1] == doctest::Approx(gn).epsilon(1e-10));
        // connections are -/+ delta/2 for the two branches
        CHECK(frames[j].berry_connection[0] == doctest::Approx(-0.5).epsilon(1e-5));
        CHECK(frames[j].berry_connection[1] == doctest::Approx(0.5).epsilon(1e-5));
    }

    const auto gammas = berry_phases(frames);
    CHECK(gammas[0].back() == doctest::Approx(-0.5 * 2.0).epsilon(1e-5));
    CHECK(gammas[1].back() == doctest::Approx(0.5 * 2.0).epsilon(1e-5));
}

TEST_CASE("frames reject degeneracy crossings") {
    const OperatorFn h = [](double t) { return cplx(t - 0.5, 0.0) * pauli(3); };
    CHECK_THROWS_AS(instantaneous_frames(h, TimeGrid(0.0, 1.0, 3)), DegeneracyCrossing);
}

TEST_CASE("adiabatic propagator starts at identity and stays unitary") {
    const JcParams p{1.0, 2.0, 0.35, 0};
    const OperatorFn h = [&p](double t) { return jc_sector_hamiltonian(p, t); };
    const auto frames = instantaneous_frames(h, TimeGrid(0.0, 3.0, 513));
    const auto u = adiabatic_propagator(frames);
    CHECK(max_abs_diff(u.front(), Operator::identity(2)) < 1e-12);
    for (std::size_t j = 0; j < u.size(); j += 64) CHECK(u[j].is_unitary(1e-9));
}

TEST_CASE("dual Hamiltonian of the sector model matches the closed form") {
    const JcParams p{1.0, 2.0, 0.35, 0};
    const double d = p.delta();
    const double r = p.rabi();
    const OperatorFn h = [&p](double t) { return jc_sector_hamiltonian(p, t); };
    const TimeGrid grid(0.0, 2.0, 4097);
    const auto frames = instantaneous_frames(h, grid);
    const auto hp = dual_hamiltonian(frames);

    double worst = 0.0;
    for (std::size_t j = 0; j < grid.samples; ++j) {
        const double t = grid.node(j);
        Operator ref(2);
        ref(0, 0) = -0.5 * d * std::cos(r * t);
        ref(0, 1) = -0.5 * d * cplx(0.0, -std::sin(r * t));
        ref(1, 0) = -0.5 * d * cplx(0.0, std::sin(r * t));
        ref(1, 1) = 0.5 * d * std::cos(r * t);
        worst = std::max(worst, max_abs_diff(hp[j], ref));
    }
    CHECK(worst < 1e-6);

    CHECK_THROWS_AS(dual_hamiltonian(instantaneous_frames(h, TimeGrid(0.0, 1.0, 2))),
                    GridTooCoarse);
}

TEST_CASE("dual Hamiltonian is Hermitian within the finite-difference estimate") {
    const JcParams p{1.0, 2.0, 0.35, 0};
    const OperatorFn h = [&p](double t) { return jc_sector_hamiltonian(p, t); };
    const TimeGrid coarse(0.0, 2.0, 513);
    const auto hp_coarse = dual_hamiltonian(instantaneous_frames(h, coarse));
    const auto hp_fine = dual_hamiltonian(instantaneous_frames(h, coarse.refined()));

    // Richardson estimate of the O(h^2) derivative error
    double est = 0.0;
    for (std::size_t j = 0; j < coarse.samples; ++j)
        est = std::max(est, max_abs_diff(hp_coarse[j], hp_fine[2 * j]));
    est *= 4.0 / 3.0;

    double defect = 0.0;
    for (const Operator& op : hp_coarse) defect = std::max(defect, max_abs_diff(op, op.adjoint()));
    CHECK(defect <= 5.0 * est + 1e-12);
}

TEST_CASE("dual expansion converges to the exact propagator") {
    const JcParams p{1.0, 1.1, 0.5, 0};  // strong coupling: rabi 1.0 well above delta 0.1
    const OperatorFn h = [&p](double t) { return jc_sector_hamiltonian(p, t); };
    const TimeGrid grid(0.0, 1.0, 1025);
    const auto series = dual_dyson_propagate(h, grid, 2);
    const Operator exact = ode_propagator(h, 0.0, 1.0);
    const double e0 = max_abs_diff(series.final(0), exact);
    const double e2 = max_abs_diff(series.final(2), exact);
    CHECK(e2 < e0);
    CHECK(e2 < 1e-3);
    CHECK_THROWS_AS(dual_dyson_propagate(h, grid, 3), BadIndex);
}

TEST_CASE("superadiabatic iteration stops on constant Hamiltonians") {
    const OperatorFn h = [](double) { return pauli(3); };
    const auto chain = superadiabatic_iterate(h, TimeGrid(0.0, 1.0, 65), 5);
    REQUIRE(chain.steps.size() == 1);
    CHECK(chain.steps[0].residual_norm < 1e-10);
    CHECK(!chain.involution);
}

TEST_CASE("superadiabatic factorization against the ODE oracle") {
    const OperatorFn h = smooth_two_level();
    const TimeGrid grid(0.0, 5.0, 2049);
    const auto chain = superadiabatic_iterate(h, grid, 2);
    REQUIRE(chain.steps.size() == 2);

    // the first dressing contracts the coupling by roughly drive-rate/gap;
    // the sequence is asymptotic, not monotone, so only step 0 must gain
    CHECK(chain.steps[0].residual_norm < 0.05);
    CHECK(chain.steps[0].residual_norm > 0.0);
    double reported = 0.0;
    for (const Operator& op : chain.steps[0].h_next) reported = std::max(reported, op.max_abs());
    CHECK(std::abs(reported - chain.steps[0].residual_norm) < 1e-15);

    // U = U_A1 Texp(-i int H2): expanding the remainder through second order
    // leaves only the cubic tail of the H2 series
    const double hstep = grid.spacing();
    const auto& track = chain.steps[0].h_next;
    std::vector<Operator> s1(grid.samples, Operator::zero(2));
    std::vector<Operator> s2(grid.samples, Operator::zero(2));
    for (std::size_t j = 1; j < grid.samples; ++j) {
        s1[j] = s1[j - 1] + cplx(0.5 * hstep, 0.0) * (track[j - 1] + track[j]);
        s2[j] = s2[j - 1] + cplx(0.5 * hstep, 0.0) * (track[j - 1] * s1[j - 1] + track[j] * s1[j]);
    }
    double first = 0.0, second = 0.0;
    for (std::size_t j = 256; j < grid.samples; j += 256) {
        const Operator exact = ode_propagator(h, grid.t0, grid.node(j));
        const Operator rem1 = Operator::identity(2) - I_UNIT * s1[j];
        first = std::max(first, max_abs_diff(chain.steps[0].u_a[j] * rem1, exact));
        second = std::max(second, max_abs_diff(chain.steps[0].u_a[j] * (rem1 - s2[j]), exact));
    }
    CHECK(second < 1e-4);
    CHECK(second < first);
}

TEST_CASE("superadiabatic iteration detects the dressing involution") {
    // exactly solvable driven two-level atom: the second dressing undoes the
    // first, so the chain closes at step 2
    const HhgParams p{0.1, 1.0, 0.75, 1.0};
    const OperatorFn h = [&p](double t) { return hhg_interaction_hamiltonian(p, t); };
    const auto chain = superadiabatic_iterate(h, TimeGrid(0.0, 5.0, 2049), 5);
    CHECK(chain.involution);
    CHECK(chain.involution_step == 2);
    REQUIRE(chain.steps.size() == 2);
    CHECK(chain.steps[0].residual_norm == doctest::Approx(0.5 * p.omega0).epsilon(1e-4));
}

#include <cmath>
#include <vector>

#include "doctest.h"
#include "qdual/jc.hpp"
#include "qdual/ode.hpp"
#include "qdual/series.hpp"

using namespace qdual;

namespace {

JcAmplitudes ode_oracle(const JcParams& p, const JcAmplitudes& init, double t) {
    const OdeRhs rhs = [&p](double s, const std::vector<cplx>& y, std::vector<cplx>& dy) {
        const Operator h = jc_sector_hamiltonian(p, s);
        dy[0] = cplx(0.0, -1.0) * (h(0, 0) * y[0] + h(0, 1) * y[1]);
        dy[1] = cplx(0.0, -1.0) * (h(1, 0) * y[0] + h(1, 1) * y[1]);
    };
    std::vector<cplx> y{init.c1, init.c2};
    y = ode_integrate(rhs, 0.0, t, y, 1e-12, 1e-14);
    return {y[0], y[1]};
}

double amp_diff(const JcAmplitudes& a, const JcAmplitudes& b) {
    return std::max(std::abs(a.c1 - b.c1), std::abs(a.c2 - b.c2));
}

}  // namespace

TEST_CASE("exact sector evolution matches the ODE oracle") {
    const JcAmplitudes init{cplx(0.6, 0.0), cplx(0.0, 0.8)};
    for (const JcParams& p :
         {JcParams{1.0, 1.5, 0.1, 0}, JcParams{2.0, 2.7, 0.25, 1}, JcParams{1.0, 1.0, 0.3, 2}}) {
        for (double t : {0.7, 3.0, 11.0}) {
            const JcAmplitudes got = jc_exact(p, init, t);
            CHECK(amp_diff(got, ode_oracle(p, init, t)) < 1e-9);
            CHECK(got.norm() == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("exact evolution is the identity when both detuning and coupling vanish") {
    const JcParams p{1.0, 1.0, 0.0, 0};
    const JcAmplitudes init{cplx(0.6, 0.2), cplx(-0.3, 0.7)};
    const JcAmplitudes got = jc_exact(p, init, 5.0);
    CHECK(amp_diff(got, init) < 1e-15);
}

TEST_CASE("resonant evolution reduces to the Rabi flop") {
    const JcParams p{1.0, 1.0, 0.2, 0};  // delta 0, rabi 0.4
    const double r = p.rabi();
    const JcAmplitudes init{1.0, 0.0};
    for (double t : {0.5, 2.0, 7.9}) {
        const JcAmplitudes got = jc_exact(p, init, t);
        CHECK(std::abs(got.c1 - cplx(std::cos(0.5 * r * t), 0.0)) < 1e-12);
        CHECK(std::abs(got.c2 - cplx(0.0, -std::sin(0.5 * r * t))) < 1e-12);
    }
}

TEST_CASE("sector Hamiltonian and dressed states") {
    const JcParams p{1.0, 1.4, 0.15, 3};
    const double gn = p.g * 2.0;  // g sqrt(4)
    const double t = 1.1;
    const Operator h = jc_sector_hamiltonian(p, t);
    CHECK(std::abs(h(0, 0)) == 0.0);
    CHECK(std::abs(h(1, 1)) == 0.0);
    CHECK(std::abs(h(0, 1) - gn * std::exp(cplx(0.0, -p.delta() * t))) < 1e-15);
    CHECK(h.is_hermitian(1e-15));

    const auto [a, b] = jc_dressed_states(p, t);
    CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(b.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(inner(a, b)) < 1e-14);
    // H a = +g sqrt(n+1) a and H b = -g sqrt(n+1) b
    const StateVector ha = h * a;
    const StateVector hb = h * b;
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(std::abs(ha[i] - gn * a[i]) < 1e-13);
        CHECK(std::abs(hb[i] + gn * b[i]) < 1e-13);
    }
}

TEST_CASE("small-lambda truncations improve order by order") {
    const JcParams p{1.0, 2.0, 0.05, 0};  // lambda 0.1
    const JcAmplitudes init{cplx(1.0, 0.0) / std::sqrt(2.0), cplx(0.0, 1.0) / std::sqrt(2.0)};
    const double t = 4.0;
    const JcAmplitudes exact = jc_exact(p, init, t);
    double prev = 10.0;
    for (int order : {0, 1, 2}) {
        const double err = amp_diff(jc_dyson_closed(p, init, t, order, false), exact);
        CHECK(err < prev);
        prev = err;
    }
    // order 0 without resummation is the free (identity) evolution
    CHECK(amp_diff(jc_dyson_closed(p, init, t, 0, false), init) < 1e-15);
}

TEST_CASE("resummed truncation tracks the exact oscillation over long windows") {
    const JcParams p{1.0, 2.0, 0.05, 0};  // lambda 0.1
    const JcAmplitudes init{1.0, 0.0};
    const double t = 150.0;
    const double plain = amp_diff(jc_dyson_closed(p, init, t, 2, false), jc_exact(p, init, t));
    const double resummed = amp_diff(jc_dyson_closed(p, init, t, 2, true), jc_exact(p, init, t));
    CHECK(resummed < 0.1 * plain);
}

TEST_CASE("closed-form truncation argument checks") {
    const JcAmplitudes init{1.0, 0.0};
    CHECK_THROWS_AS(jc_dyson_closed(JcParams{1.0, 1.0, 0.1, 0}, init, 1.0, 1, false), ZeroDetuning);
    CHECK_THROWS_AS(jc_dual_closed(JcParams{1.0, 1.5, 0.0, 0}, init, 1.0, 1), ZeroCoupling);
    CHECK_THROWS_AS(jc_dyson_closed(JcParams{1.0, 1.5, 0.1, 0}, init, 1.0, 3, false), BadIndex);
    CHECK_THROWS_AS(jc_dyson_closed(JcParams{1.0, 1.5, 0.1, 0}, init, 1.0, -1, false), BadIndex);
    CHECK_THROWS_AS(jc_dual_closed(JcParams{1.0, 1.5, 0.1, 0}, init, 1.0, 3), BadIndex);
}

TEST_CASE("dual truncations are exact on resonance") {
    const JcParams p{1.0, 1.0, 0.2, 1};
    const JcAmplitudes init{cplx(0.48, -0.36), cplx(0.0, 0.8)};
    for (double t : {0.3, 2.0, 9.0}) {
        const JcAmplitudes exact = jc_exact(p, init, t);
        for (int order : {0, 1, 2})
            CHECK(amp_diff(jc_dual_closed(p, init, t, order), exact) < 1e-12);
    }
}

TEST_CASE("dual truncations improve order by order off resonance") {
    const JcParams p{1.0, 1.05, 0.25, 3};  // rabi 1.0, delta 0.05
    const JcAmplitudes init{cplx(0.0, 1.0), 0.0};
    const double t = 6.0;
    const JcAmplitudes exact = jc_exact(p, init, t);
    const double e0 = amp_diff(jc_dual_closed(p, init, t, 0), exact);
    const double e1 = amp_diff(jc_dual_closed(p, init, t, 1), exact);
    const double e2 = amp_diff(jc_dual_closed(p, init, t, 2), exact);
    CHECK(e1 < e0);
    CHECK(e2 < e1);
    CHECK(e2 < 1e-3);
}

TEST_CASE("engine expansion agrees with the closed forms") {
    const JcParams p{1.0, 2.0, 0.1, 0};
    const OperatorFn h = [&p](double t) { return jc_sector_hamiltonian(p, t); };
    const double t1 = 3.0;
    const TimeGrid grid(0.0, t1, 4097);
    const JcAmplitudes init{cplx(0.6, 0.0), cplx(0.0, 0.8)};
    StateVector psi0(2);
    psi0[0] = init.c1;
    psi0[1] = init.c2;

    const auto dyson = dyson_propagate(h, grid, 2);
    for (int k : {1, 2}) {
        const StateVector got = dyson.final(static_cast<std::size_t>(k)) * psi0;
        const JcAmplitudes want = jc_dyson_closed(p, init, t1, k, false);
        CHECK(std::abs(got[0] - want.c1) < 1e-6);
        CHECK(std::abs(got[1] - want.c2) < 1e-6);
    }

    const auto dual = dual_dyson_propagate(h, grid, 2);
    for (int k : {0, 1, 2}) {
        const StateVector got = dual.final(static_cast<std::size_t>(k)) * psi0;
        const JcAmplitudes want = jc_dual_closed(p, init, t1, k);
        CHECK(std::abs(got[0] - want.c1) < 1e-6);
        CHECK(std::abs(got[1] - want.c2) < 1e-6);
    }
}

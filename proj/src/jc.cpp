#include "qdual/jc.hpp"

#include <cmath>
#include <string>

namespace qdual {

double JcParams::lambda() const {
    if (delta() == 0.0) throw ZeroDetuning("JcParams: lambda undefined at zero detuning");
    return rabi() / delta();
}

JcAmplitudes jc_exact(const JcParams& p, const JcAmplitudes& init, double t) {
    const double d = p.delta();
    const double r = p.rabi();
    const double om = p.big_omega();
    if (om == 0.0) return init;  // free sector, nothing evolves

    const double co = std::cos(0.5 * om * t);
    const double si = std::sin(0.5 * om * t);
    const cplx diag(co, d / om * si);
    const cplx coup(0.0, -r / om * si);
    const cplx ph = std::exp(cplx(0.0, -0.5 * d * t));

    JcAmplitudes out;
    out.c1 = (init.c1 * diag + init.c2 * coup) * ph;
    out.c2 = (init.c2 * std::conj(diag) + init.c1 * coup) * std::conj(ph);
    return out;
}

Operator jc_sector_hamiltonian(const JcParams& p, double t) {
    const double gn = p.g * std::sqrt(static_cast<double>(p.n) + 1.0);
    Operator h(2);
    h(0, 1) = gn * std::exp(cplx(0.0, -p.delta() * t));
    h(1, 0) = std::conj(h(0, 1));
    return h;
}

std::pair<StateVector, StateVector> jc_dressed_states(const JcParams& p, double t) {
    const double s = 1.0 / std::sqrt(2.0);
    StateVector a(2), b(2);
    a[0] = s * std::exp(cplx(0.0, -p.delta() * t));
    a[1] = s;
    b[0] = s;
    b[1] = -s * std::exp(cplx(0.0, p.delta() * t));
    return {a, b};
}

namespace {

void check_order(int order, const char* who) {
    if (order < 0 || order > 2)
        throw BadIndex(std::string(who) + ": order must lie in {0,1,2}, got " +
                       std::to_string(order));
}

}  // namespace

JcAmplitudes jc_dyson_closed(const JcParams& p, const JcAmplitudes& init, double t, int order,
                             bool resummed) {
    check_order(order, "jc_dyson_closed");
    const double d = p.delta();
    if (d == 0.0) throw ZeroDetuning("jc_dyson_closed: requires nonzero detuning");
    const double r = p.rabi();
    const double lam = r / d;

    if (resummed) {
        // secular term absorbed into the shifted frequency inside cos/sin only
        const double dp = d + r * r / (2.0 * d);
        const double co = std::cos(0.5 * dp * t);
        const double si = std::sin(0.5 * dp * t);
        const double pk = order <= 1 ? 1.0 : 1.0 - 0.5 * lam * lam;
        const double qk = order == 0 ? 0.0 : lam;
        const cplx ph = std::exp(cplx(0.0, -0.5 * d * t));
        JcAmplitudes out;
        out.c1 = (init.c1 * cplx(co, pk * si) + init.c2 * cplx(0.0, -qk * si)) * ph;
        out.c2 = (init.c2 * cplx(co, -pk * si) + init.c1 * cplx(0.0, -qk * si)) * std::conj(ph);
        return out;
    }

    const cplx e_m = 1.0 - std::exp(cplx(0.0, -d * t));  // 1 - e^{-i Delta t}
    const cplx e_p = std::exp(cplx(0.0, d * t)) - 1.0;   // e^{+i Delta t} - 1
    JcAmplitudes out = init;
    if (order >= 1) {
        out.c1 -= 0.5 * lam * init.c2 * e_m;
        out.c2 -= 0.5 * lam * init.c1 * e_p;
    }
    if (order >= 2) {
        const cplx quart = cplx(0.0, 0.25 * lam * lam);
        out.c1 += init.c1 * quart * (d * t + I_UNIT * e_m);
        out.c2 -= init.c2 * quart * (d * t + I_UNIT * e_p);
    }
    return out;
}

JcAmplitudes jc_dual_closed(const JcParams& p, const JcAmplitudes& init, double t, int order) {
    check_order(order, "jc_dual_closed");
    const double r = p.rabi();
    if (r == 0.0) throw ZeroCoupling("jc_dual_closed: requires nonzero coupling");
    const double d = p.delta();
    const double inv_lam = d / r;  // 1/lambda

    const double co = std::cos(0.5 * r * t);
    const double si = std::sin(0.5 * r * t);
    cplx k1 = co, k2 = co, q = si;
    if (order >= 1) {
        k1 += cplx(0.0, inv_lam * si);
        k2 -= cplx(0.0, inv_lam * si);
    }
    if (order >= 2) {
        const double half_sq = 0.5 * inv_lam * inv_lam;
        const double secular = half_sq * (0.5 * r * t) * si;
        k1 -= secular;
        k2 -= secular;
        q -= half_sq * (si - (0.5 * r * t) * co);
    }
    const cplx ph = std::exp(cplx(0.0, -0.5 * d * t));
    JcAmplitudes out;
    out.c1 = (init.c1 * k1 - I_UNIT * init.c2 * q) * ph;
    out.c2 = (init.c2 * k2 - I_UNIT * init.c1 * q) * std::conj(ph);
    return out;
}

}  // namespace qdual

#include "qdual/hhg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qdual {

namespace {

constexpr int kMaxOrder = 64;

double bessel_series(int nu, double z) {
    // ascending series sum_m (-1)^m (z/2)^{nu+2m} / (m! (nu+m)!)
    const double half = 0.5 * z;
    double term = std::exp(nu * std::log(half) - std::lgamma(nu + 1.0));
    double sum = term;
    const double q = half * half;
    for (int m = 1; m <= 240; ++m) {
        term *= -q / (static_cast<double>(m) * static_cast<double>(nu + m));
        sum += term;
        if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300)) break;
    }
    return sum;
}

double bessel_miller(int nu, double z) {
    // downward recurrence J_{k-1} = (2k/z) J_k - J_{k+1}, normalized through
    // J_0 + 2 sum_k J_{2k} = 1
    const int start = 2 * ((std::max(nu, static_cast<int>(z)) + 40) / 2 + 1);
    double jp = 0.0;    // J_{k+1}
    double jc = 1e-30;  // J_k
    double result = 0.0;
    double norm = 2.0 * jc;  // start is even
    for (int k = start; k >= 1; --k) {
        const double jm = (2.0 * k / z) * jc - jp;  // J_{k-1}
        jp = jc;
        jc = jm;
        if (k - 1 == nu) result = jc;
        if ((k - 1) % 2 == 0) norm += (k == 1 ? 1.0 : 2.0) * jc;
        // rescale to dodge overflow on long recurrences
        if (std::abs(jc) > 1e200) {
            jc *= 1e-200;
            jp *= 1e-200;
            result *= 1e-200;
            norm *= 1e-200;
        }
    }
    return result / norm;
}

}  // namespace

double bessel_j(int order, double z) {
    if (order < 0) throw BadIndex("bessel_j: order must be non-negative");
    if (order > kMaxOrder)
        throw OrderTooLarge("bessel_j: order " + std::to_string(order) + " exceeds 64");
    if (z < 0.0) throw std::invalid_argument("bessel_j: argument must be non-negative");
    if (z == 0.0) return order == 0 ? 1.0 : 0.0;
    if (z <= 12.0) return bessel_series(order, z);
    return bessel_miller(order, z);
}

double renormalized_gap(const HhgParams& p) { return p.omega0 * bessel_j(0, p.z()); }

double bessel_identity_residual(double z, double phi, int cutoff) {
    if (cutoff < z + 10.0)
        throw CutoffTooSmall("bessel_identity_residual: cutoff must be at least z + 10");
    const Operator exact = unitary_exponential(pauli(1), -z * std::sin(phi));

    cplx even = bessel_j(0, z);
    cplx odd = 0.0;
    for (int n = 1; n <= cutoff; ++n) {
        const double jn = bessel_j(n, z);
        if (n % 2 == 0)
            even += 2.0 * jn * std::cos(n * phi);
        else
            odd += cplx(0.0, 2.0 * jn * std::sin(n * phi));
    }
    Operator trunc = even * Operator::identity(2) + odd * pauli(1);
    return max_abs_diff(exact, trunc);
}

Operator hhg_interaction_hamiltonian(const HhgParams& p, double t) {
    Operator h(2);
    h(0, 1) = p.field * p.dipole * std::cos(p.omegaL * t) * std::exp(cplx(0.0, p.omega0 * t));
    h(1, 0) = std::conj(h(0, 1));
    return h;
}

Operator hhg_leading_propagator(const HhgParams& p, double t, Picture pic) {
    const double theta = p.z_half() * std::sin(p.omegaL * t);
    const double co = std::cos(theta);
    const double si = std::sin(theta);
    Operator u(2);
    // e^{-i sigma1 theta}
    u(0, 0) = co;
    u(0, 1) = cplx(0.0, -si);
    u(1, 0) = cplx(0.0, -si);
    u(1, 1) = co;
    if (pic == Picture::interaction) {
        const cplx ph = std::exp(cplx(0.0, 0.5 * p.omega0 * t));
        u(0, 0) *= ph;
        u(0, 1) *= ph;
        u(1, 0) *= std::conj(ph);
        u(1, 1) *= std::conj(ph);
    }
    return u;
}

Operator hhg_dual_hamiltonian(const HhgParams& p, double t) {
    const double two_theta = p.z() * std::sin(p.omegaL * t);
    const double co = std::cos(two_theta);
    const double si = std::sin(two_theta);
    Operator h(2);
    h(0, 0) = 0.5 * p.omega0 * co;
    h(0, 1) = cplx(0.0, -0.5 * p.omega0 * si);
    h(1, 0) = cplx(0.0, 0.5 * p.omega0 * si);
    h(1, 1) = -0.5 * p.omega0 * co;
    return h;
}

namespace {

// truncation index for Bessel sums: |J_k(z)| < 1e-14 once past the turning point
int bessel_cutoff(double z) {
    int k = static_cast<int>(z) + 11;
    while (k < kMaxOrder && std::abs(bessel_j(k, z)) >= 1e-14) ++k;
    return k;
}

// integrals of the transformed Hamiltonian:
// Ic(t) = int_0^t cos(z sin wL s) ds = J0 t + sum_{n>=1} J_{2n} sin(2n wL t)/(n wL)
// Is(t) = int_0^t sin(z sin wL s) ds = 2 sum_{n>=0} J_{2n+1} (1 - cos((2n+1) wL t))/((2n+1) wL)
struct DualIntegrals {
    double secular;  // J0(z) t
    double ic_osc;   // Ic - secular
    double is;
};

DualIntegrals dual_integrals(const HhgParams& p, double t, int cutoff) {
    DualIntegrals di{bessel_j(0, p.z()) * t, 0.0, 0.0};
    for (int n = 1; 2 * n <= cutoff; ++n)
        di.ic_osc += bessel_j(2 * n, p.z()) * std::sin(2.0 * n * p.omegaL * t) /
                     (static_cast<double>(n) * p.omegaL);
    for (int n = 0; 2 * n + 1 <= cutoff; ++n)
        di.is += 2.0 * bessel_j(2 * n + 1, p.z()) *
                 (1.0 - std::cos((2.0 * n + 1.0) * p.omegaL * t)) /
                 ((2.0 * n + 1.0) * p.omegaL);
    return di;
}

}  // namespace

StateVector hhg_state_first_order(const HhgParams& p, const Populations& init, double t,
                                  bool renormalized, Picture pic) {
    const int cutoff = bessel_cutoff(p.z());
    const DualIntegrals di = dual_integrals(p, t, cutoff);

    StateVector psi(2);
    psi[0] = init.c2;
    psi[1] = init.c1;

    if (renormalized) {
        // e^{-i (omega0/2) J0 t sigma3} onto the initial state
        const cplx ph = std::exp(cplx(0.0, -0.5 * p.omega0 * di.secular));
        psi[0] *= ph;
        psi[1] *= std::conj(ph);
    }

    // bracket I - i (omega0/2)(sigma3 * Ic' + sigma2 * Is), Ic' with or without
    // the secular piece depending on the resummation choice
    const double ic = renormalized ? di.ic_osc : di.ic_osc + di.secular;
    const cplx d0 = cplx(1.0, -0.5 * p.omega0 * ic);
    const cplx d1 = cplx(1.0, 0.5 * p.omega0 * ic);
    const cplx off = cplx(0.0, -0.5 * p.omega0) * cplx(0.0, -di.is);  // -i w0/2 * (-i Is)
    const cplx off10 = cplx(0.0, -0.5 * p.omega0) * cplx(0.0, di.is);
    StateVector bra(2);
    bra[0] = d0 * psi[0] + off * psi[1];
    bra[1] = off10 * psi[0] + d1 * psi[1];

    const Operator u0 = hhg_leading_propagator(p, t, pic);
    return u0 * bra;
}

std::vector<double> dipole_expectation(const HhgParams& p, const Populations& init,
                                       const TimeGrid& grid) {
    return dipole_components(p, init, grid).total;
}

DipoleSignal dipole_components(const HhgParams& p, const Populations& init, const TimeGrid& grid) {
    const double w0r = renormalized_gap(p);
    const cplx cross = std::conj(init.c2) * init.c1;
    const double pop_diff = std::norm(init.c1) - std::norm(init.c2);
    const int cutoff = bessel_cutoff(p.z());

    DipoleSignal sig;
    sig.total.resize(grid.samples);
    sig.carrier.resize(grid.samples);
    sig.odd.resize(grid.samples);
    sig.hyper.resize(grid.samples);

    for (std::size_t j = 0; j < grid.samples; ++j) {
        const double t = grid.node(j);
        const double re_k = cross.real() * std::cos(w0r * t) - cross.imag() * std::sin(w0r * t);
        const double im_k = cross.real() * std::sin(w0r * t) + cross.imag() * std::cos(w0r * t);

        double odd_sum = 0.0;
        for (int n = 0; 2 * n + 1 <= cutoff; ++n)
            odd_sum += bessel_j(2 * n + 1, p.z()) *
                       (std::cos((2.0 * n + 1.0) * p.omegaL * t) - 1.0) /
                       ((n + 0.5) * p.omegaL);
        double hyper_sum = 0.0;
        for (int n = 1; 2 * n <= cutoff; ++n)
            hyper_sum += bessel_j(2 * n, p.z()) * std::sin(2.0 * n * p.omegaL * t) /
                         (static_cast<double>(n) * p.omegaL);

        sig.carrier[j] = -p.dipole * 2.0 * re_k;
        sig.odd[j] = -p.dipole * pop_diff * p.omega0 * odd_sum;
        sig.hyper[j] = -p.dipole * (-2.0 * im_k) * p.omega0 * hyper_sum;
        sig.total[j] = sig.carrier[j] + sig.odd[j] + sig.hyper[j];
    }
    return sig;
}

double dipole_expectation_crosscheck(const HhgParams& p, const Populations& init,
                                     const TimeGrid& grid, Picture pic) {
    const DipoleSignal sig = dipole_components(p, init, grid);
    double worst = 0.0;
    for (std::size_t j = 0; j < grid.samples; ++j) {
        const StateVector psi = hhg_state_first_order(p, init, grid.node(j), true, pic);
        const double x_state = -p.dipole * 2.0 * std::real(std::conj(psi[0]) * psi[1]);
        worst = std::max(worst, std::abs(sig.total[j] - x_state));
    }
    return worst;
}

}  // namespace qdual

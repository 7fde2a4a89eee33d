#include "qdual/wkbj.hpp"

#include <cmath>
#include <string>

#include "qdual/errors.hpp"
#include "qdual/ode.hpp"

namespace qdual {

namespace {

double alpha_at(const WkbjProblem& problem, double x) {
    const double a = problem.alpha(x);
    if (!(a > 0.0))
        throw TurningPoint("alpha(x) <= 0 at x = " + std::to_string(x) +
                           "; turning points are out of scope");
    return a;
}

// int_{x0}^x alpha by trapezoid on a dense uniform grid
double phase_integral(const WkbjProblem& problem, double x) {
    if (x < problem.x0 || x > problem.x1)
        throw ValidationError("wkbj: x outside [x0, x1]");
    constexpr std::size_t n = 20001;
    const double h = (x - problem.x0) / static_cast<double>(n - 1);
    if (h == 0.0) {
        alpha_at(problem, problem.x0);
        return 0.0;
    }
    double sum = 0.5 * (alpha_at(problem, problem.x0) + alpha_at(problem, x));
    for (std::size_t j = 1; j + 1 < n; ++j)
        sum += alpha_at(problem, problem.x0 + h * static_cast<double>(j));
    return sum * h;
}

OdeRhs wkbj_rhs(const WkbjProblem& problem) {
    return [alpha = problem.alpha](double x, const std::vector<cplx>& y, std::vector<cplx>& dy) {
        const double a = alpha(x);
        dy[0] = y[1];
        dy[1] = -a * a * y[0];
    };
}

}  // namespace

cplx wkbj_closed(const WkbjProblem& problem, double x) {
    const double a0 = alpha_at(problem, problem.x0);
    const double ax = alpha_at(problem, x);
    const double phi = phase_integral(problem, x);
    const cplx c1 = std::sqrt(a0) * problem.psi0;
    const cplx c2 = problem.phi0 / std::sqrt(a0);
    return (c1 * std::cos(phi) + c2 * std::sin(phi)) / std::sqrt(ax);
}

Operator wkbj_matrix_propagator(const WkbjProblem& problem, double x) {
    const double a0 = alpha_at(problem, problem.x0);
    const double ax = alpha_at(problem, x);
    const double phi = phase_integral(problem, x);
    const double norm = 1.0 / std::sqrt(ax * a0);
    Operator u(2);
    u(0, 0) = norm * a0 * std::cos(phi);
    u(0, 1) = norm * std::sin(phi);
    u(1, 0) = -norm * ax * a0 * std::sin(phi);
    u(1, 1) = norm * ax * std::cos(phi);
    return u;
}

std::pair<cplx, cplx> reference_solve(const WkbjProblem& problem, double x, double tol) {
    if (tol < 1e-12) throw ValidationError("reference_solve: tol must be >= 1e-12");
    if (x < problem.x0) throw ValidationError("reference_solve: x precedes x0");
    std::vector<cplx> y{problem.psi0, problem.phi0};
    if (x != problem.x0) y = ode_integrate(wkbj_rhs(problem), problem.x0, x, y, tol, tol);
    return {y[0], y[1]};
}

std::vector<std::pair<cplx, cplx>> reference_solve_samples(const WkbjProblem& problem,
                                                           const std::vector<double>& xs,
                                                           double tol) {
    if (tol < 1e-12) throw ValidationError("reference_solve: tol must be >= 1e-12");
    const std::vector<cplx> y0{problem.psi0, problem.phi0};
    const auto states = ode_integrate_samples(wkbj_rhs(problem), problem.x0, y0, xs, tol, tol);
    std::vector<std::pair<cplx, cplx>> out;
    out.reserve(states.size());
    for (const auto& y : states) out.emplace_back(y[0], y[1]);
    return out;
}

namespace {

// right eigenvectors r_+- = (1, -+ i alpha)/sqrt(-+ 2 i alpha) of
// L = i [[0,1],[-alpha^2,0]] (eigenvalues +-alpha), principal sqrt branch
StateVector right_vector(int branch, double a) {
    const cplx ia(0.0, a);
    const cplx s = branch == 0 ? std::sqrt(cplx(0.0, -2.0 * a)) : std::sqrt(cplx(0.0, 2.0 * a));
    StateVector v(2);
    v[0] = 1.0 / s;
    v[1] = (branch == 0 ? -ia : ia) / s;
    return v;
}

// biorthogonal left partners l_+- = (+- i alpha, 1)/conj(sqrt(-+ 2 i alpha))
StateVector left_vector(int branch, double a) {
    const cplx ia(0.0, a);
    const cplx s = branch == 0 ? std::sqrt(cplx(0.0, -2.0 * a)) : std::sqrt(cplx(0.0, 2.0 * a));
    StateVector v(2);
    v[0] = (branch == 0 ? ia : -ia) / std::conj(s);
    v[1] = 1.0 / std::conj(s);
    return v;
}

}  // namespace

std::vector<std::vector<cplx>> wkbj_berry_connections(const WkbjProblem& problem,
                                                      std::size_t samples) {
    if (samples < 3) throw GridTooCoarse("wkbj_berry_connections: need at least 3 samples");
    const double h = (problem.x1 - problem.x0) / static_cast<double>(samples - 1);
    std::vector<double> a(samples);
    for (std::size_t j = 0; j < samples; ++j)
        a[j] = alpha_at(problem, problem.x0 + h * static_cast<double>(j));

    std::vector<std::vector<cplx>> conn(2, std::vector<cplx>(samples));
    for (int b = 0; b < 2; ++b) {
        std::vector<StateVector> r;
        r.reserve(samples);
        for (std::size_t j = 0; j < samples; ++j) r.push_back(right_vector(b, a[j]));
        for (std::size_t j = 0; j < samples; ++j) {
            StateVector dr(2);
            if (j == 0) {
                for (std::size_t i = 0; i < 2; ++i)
                    dr[i] = (-3.0 * r[0][i] + 4.0 * r[1][i] - r[2][i]) / (2.0 * h);
            } else if (j == samples - 1) {
                for (std::size_t i = 0; i < 2; ++i)
                    dr[i] = (3.0 * r[j][i] - 4.0 * r[j - 1][i] + r[j - 2][i]) / (2.0 * h);
            } else {
                for (std::size_t i = 0; i < 2; ++i)
                    dr[i] = (r[j + 1][i] - r[j - 1][i]) / (2.0 * h);
            }
            const StateVector l = left_vector(b, a[j]);
            conn[b][j] = I_UNIT * (std::conj(l[0]) * dr[0] + std::conj(l[1]) * dr[1]);
        }
    }
    return conn;
}

}  // namespace qdual

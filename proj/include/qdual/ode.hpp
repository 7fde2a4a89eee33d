#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "qdual/errors.hpp"
#include "qdual/linalg.hpp"

namespace qdual {

// dy/dt = f(t, y) for a small complex system.
using OdeRhs = std::function<void(double, const std::vector<cplx>&, std::vector<cplx>&)>;

namespace detail {

// One Dormand-Prince 5(4) step from (t, y) with trial size h.
// Returns the embedded error estimate scaled against the tolerances.
inline double dp45_step(const OdeRhs& f, double t, const std::vector<cplx>& y, double h,
                        double rel_tol, double abs_tol, std::vector<cplx>& out) {
    static const double a21 = 1.0 / 5.0;
    static const double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static const double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static const double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                        a54 = -212.0 / 729.0;
    static const double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                        a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
    static const double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                        b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    static const double e1 = 5179.0 / 57600.0, e3 = 7571.0 / 16695.0, e4 = 393.0 / 640.0,
                        e5 = -92097.0 / 339200.0, e6 = 187.0 / 2100.0, e7 = 1.0 / 40.0;

    const std::size_t n = y.size();
    std::vector<cplx> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n);

    f(t, y, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a21 * k1[i]);
    f(t + h / 5.0, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    f(t + 3.0 * h / 10.0, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(t + 4.0 * h / 5.0, tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
        tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(t + 8.0 * h / 9.0, tmp, k5);
    for (std::size_t i = 0; i < n; ++i)
        tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    f(t + h, tmp, k6);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    f(t + h, out, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const cplx y4 = y[i] + h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                    e6 * k6[i] + e7 * k7[i]);
        const double sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(out[i]));
        const double d = std::abs(out[i] - y4) / sc;
        err += d * d;
    }
    return std::sqrt(err / static_cast<double>(n));
}

}  // namespace detail

// Adaptive integration of dy/dt = f(t,y) from t0 to t1 (t1 >= t0).
// Throws StepUnderflow when the accepted step collapses below 1e-14 of the span
// or the step budget runs out.
inline std::vector<cplx> ode_integrate(const OdeRhs& f, double t0, double t1, std::vector<cplx> y,
                                       double rel_tol = 1e-10, double abs_tol = 1e-12) {
    if (t1 == t0) return y;
    const double span = t1 - t0;
    const double h_min = 1e-14 * span;
    double t = t0;
    double h = span / 100.0;
    std::vector<cplx> out(y.size());
    std::size_t steps = 0;
    constexpr std::size_t max_steps = 50'000'000;
    while (t < t1) {
        const double remaining = t1 - t;
        const bool last = h >= remaining;
        if (last) h = remaining;
        const double err = detail::dp45_step(f, t, y, h, rel_tol, abs_tol, out);
        if (err <= 1.0) {
            t = last ? t1 : t + h;
            y = out;
        }
        double factor = 0.9 * std::pow(std::max(err, 1e-12), -0.2);
        factor = std::min(5.0, std::max(0.2, factor));
        h *= factor;
        if (h < h_min && t < t1) throw StepUnderflow("ode_integrate: step size underflow");
        if (++steps > max_steps) throw StepUnderflow("ode_integrate: step budget exhausted");
    }
    return y;
}

// Integration with outputs at the requested times (ascending, times[0] >= t0).
// Steps are clipped to land on each output time exactly.
inline std::vector<std::vector<cplx>> ode_integrate_samples(const OdeRhs& f, double t0,
                                                            const std::vector<cplx>& y0,
                                                            const std::vector<double>& times,
                                                            double rel_tol = 1e-10,
                                                            double abs_tol = 1e-12) {
    std::vector<std::vector<cplx>> out;
    out.reserve(times.size());
    std::vector<cplx> y = y0;
    double t = t0;
    for (double target : times) {
        y = ode_integrate(f, t, target, y, rel_tol, abs_tol);
        t = target;
        out.push_back(y);
    }
    return out;
}

}  // namespace qdual

#include "qdual/series.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace qdual {

namespace {

std::vector<Operator> sample_track(const OperatorFn& h, const TimeGrid& grid) {
    std::vector<Operator> track;
    track.reserve(grid.samples);
    for (std::size_t j = 0; j < grid.samples; ++j) track.push_back(h(grid.node(j)));
    return track;
}

// Partial sums of the time-ordered expansion, from the sampled Hamiltonian:
// each order is the running trapezoid integral of H times the previous order.
std::vector<std::vector<Operator>> dyson_partial_sums(const std::vector<Operator>& track,
                                                      const TimeGrid& grid, int order) {
    if (order < 0 || order > 4)
        throw BadIndex("dyson_propagate: order must lie in [0,4], got " + std::to_string(order));
    const std::size_t n = track.empty() ? 0 : track.front().dim();
    const std::size_t m = grid.samples;
    const double h = grid.spacing();

    std::vector<Operator> prev(m, Operator::identity(n));  // order-0 term
    std::vector<std::vector<Operator>> sums(static_cast<std::size_t>(order) + 1, prev);

    for (int ord = 1; ord <= order; ++ord) {
        std::vector<Operator> integrand(m);
        for (std::size_t j = 0; j < m; ++j) integrand[j] = track[j] * prev[j];
        std::vector<Operator> cur(m, Operator::zero(n));
        for (std::size_t j = 1; j < m; ++j)
            cur[j] = cur[j - 1] + (cplx(0.0, -0.5) * h) * (integrand[j - 1] + integrand[j]);
        for (std::size_t j = 0; j < m; ++j)
            for (int k = ord; k <= order; ++k) sums[static_cast<std::size_t>(k)][j] += cur[j];
        prev = std::move(cur);
    }
    return sums;
}

struct PinnedGauge {
    std::vector<std::size_t> pin;  // pinned component per branch
};

// Re-phase v so that component `pin` is real and positive.
void apply_pin(StateVector& v, std::size_t pin) {
    const cplx c = v[pin];
    const double a = std::abs(c);
    if (a == 0.0) return;
    const cplx ph = std::conj(c) / a;
    for (cplx& x : v.amplitudes) x *= ph;
}

// Pick the pinned component: the largest-modulus entry, near-ties preferring
// the branch's own index, then the lowest index. Keeps the gauge deterministic
// when several components share the maximal modulus.
std::size_t choose_pin(const StateVector& v, std::size_t branch) {
    double best = 0.0;
    for (const cplx& x : v.amplitudes) best = std::max(best, std::abs(x));
    const double cutoff = best - 1e-9;
    if (branch < v.dim() && std::abs(v[branch]) >= cutoff) return branch;
    for (std::size_t i = 0; i < v.dim(); ++i)
        if (std::abs(v[i]) >= cutoff) return i;
    return 0;
}

std::vector<EigenFrame> frames_from_track(const std::vector<Operator>& track, const TimeGrid& grid,
                                          double degeneracy_tol) {
    const std::size_t m = grid.samples;
    const std::size_t n = track.front().dim();

    std::vector<EigenSystem> systems;
    systems.reserve(m);
    double max_abs_e = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        systems.push_back(hermitian_eigensystem(track[j]));
        for (double e : systems.back().eigenvalues) max_abs_e = std::max(max_abs_e, std::abs(e));
    }
    const double tol = degeneracy_tol >= 0.0 ? degeneracy_tol : 1e-8 * max_abs_e;
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (systems[j].eigenvalues[i + 1] - systems[j].eigenvalues[i] <= tol)
                throw DegeneracyCrossing("instantaneous_frames: eigenvalue gap at t = " +
                                         std::to_string(grid.node(j)) + " is within tolerance");

    std::vector<EigenFrame> frames(m);
    PinnedGauge gauge;
    gauge.pin.resize(n);

    // node 0: branches are the ascending eigenvalues; fix the pinning gauge
    frames[0].time = grid.node(0);
    frames[0].energies = systems[0].eigenvalues;
    frames[0].vectors = systems[0].eigenvectors;
    for (std::size_t b = 0; b < n; ++b) {
        gauge.pin[b] = choose_pin(frames[0].vectors[b], b);
        apply_pin(frames[0].vectors[b], gauge.pin[b]);
    }

    // later nodes: greedy maximal-overlap continuation of each branch
    for (std::size_t j = 1; j < m; ++j) {
        frames[j].time = grid.node(j);
        frames[j].energies.resize(n);
        frames[j].vectors.resize(n);
        std::vector<bool> branch_done(n, false), cand_done(n, false);
        for (std::size_t pick = 0; pick < n; ++pick) {
            double best = -1.0;
            std::size_t bb = 0, bi = 0;
            for (std::size_t b = 0; b < n; ++b) {
                if (branch_done[b]) continue;
                for (std::size_t i = 0; i < n; ++i) {
                    if (cand_done[i]) continue;
                    const double ov = std::abs(inner(frames[j - 1].vectors[b],
                                                     systems[j].eigenvectors[i]));
                    if (ov > best) {
                        best = ov;
                        bb = b;
                        bi = i;
                    }
                }
            }
            branch_done[bb] = true;
            cand_done[bi] = true;
            frames[j].energies[bb] = systems[j].eigenvalues[bi];
            frames[j].vectors[bb] = systems[j].eigenvectors[bi];
        }
        for (std::size_t b = 0; b < n; ++b) {
            StateVector& v = frames[j].vectors[b];
            if (std::abs(v[gauge.pin[b]]) < 0.2 / std::sqrt(static_cast<double>(n)))
                gauge.pin[b] = choose_pin(v, b);
            apply_pin(v, gauge.pin[b]);
        }
    }

    // Berry connections <n,t|i d/dt|n,t> = -Im <v|dv/dt> by finite differences
    const double h = grid.spacing();
    for (std::size_t j = 0; j < m; ++j) frames[j].berry_connection.resize(n);
    for (std::size_t b = 0; b < n; ++b) {
        for (std::size_t j = 0; j < m; ++j) {
            StateVector dv(n);
            if (m == 2) {
                for (std::size_t k = 0; k < n; ++k)
                    dv[k] = (frames[1].vectors[b][k] - frames[0].vectors[b][k]) / h;
            } else if (j == 0) {
                for (std::size_t k = 0; k < n; ++k)
                    dv[k] = (-3.0 * frames[0].vectors[b][k] + 4.0 * frames[1].vectors[b][k] -
                             frames[2].vectors[b][k]) /
                            (2.0 * h);
            } else if (j == m - 1) {
                for (std::size_t k = 0; k < n; ++k)
                    dv[k] = (3.0 * frames[j].vectors[b][k] - 4.0 * frames[j - 1].vectors[b][k] +
                             frames[j - 2].vectors[b][k]) /
                            (2.0 * h);
            } else {
                for (std::size_t k = 0; k < n; ++k)
                    dv[k] = (frames[j + 1].vectors[b][k] - frames[j - 1].vectors[b][k]) /
                            (2.0 * h);
            }
            frames[j].berry_connection[b] = -std::imag(inner(frames[j].vectors[b], dv));
        }
    }
    return frames;
}

// Cumulative trapezoid of per-node branch values: out[branch][node].
std::vector<std::vector<double>> cumulative_trapezoid(const std::vector<EigenFrame>& frames,
                                                      bool of_energies) {
    const std::size_t m = frames.size();
    const std::size_t n = frames.front().energies.size();
    const double h = m > 1 ? frames[1].time - frames[0].time : 0.0;
    std::vector<std::vector<double>> out(n, std::vector<double>(m, 0.0));
    for (std::size_t b = 0; b < n; ++b)
        for (std::size_t j = 1; j < m; ++j) {
            const double f0 = of_energies ? frames[j - 1].energies[b]
                                          : frames[j - 1].berry_connection[b];
            const double f1 = of_energies ? frames[j].energies[b] : frames[j].berry_connection[b];
            out[b][j] = out[b][j - 1] + 0.5 * h * (f0 + f1);
        }
    return out;
}

std::vector<Operator> adiabatic_from_frames(const std::vector<EigenFrame>& frames) {
    const std::size_t m = frames.size();
    const std::size_t n = frames.front().energies.size();
    const auto gamma = cumulative_trapezoid(frames, false);
    const auto phase = cumulative_trapezoid(frames, true);
    std::vector<Operator> u(m, Operator::zero(n));
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t b = 0; b < n; ++b)
            u[j] += std::exp(cplx(0.0, gamma[b][j] - phase[b][j])) *
                    Operator::outer(frames[j].vectors[b], frames[0].vectors[b]);
    return u;
}

std::vector<Operator> dual_from_frames(const std::vector<EigenFrame>& frames) {
    const std::size_t m = frames.size();
    const std::size_t n = frames.front().energies.size();
    if (m < 3)
        throw GridTooCoarse("dual_hamiltonian: need at least 3 samples for the derivative");
    const double h = frames[1].time - frames[0].time;
    const auto gamma = cumulative_trapezoid(frames, false);
    const auto phase = cumulative_trapezoid(frames, true);

    std::vector<Operator> out(m, Operator::zero(n));
    for (std::size_t j = 0; j < m; ++j) {
        // branch derivatives at node j (same stencils as the connections)
        std::vector<StateVector> dv(n, StateVector(n));
        for (std::size_t b = 0; b < n; ++b) {
            if (j == 0) {
                for (std::size_t k = 0; k < n; ++k)
                    dv[b][k] = (-3.0 * frames[0].vectors[b][k] + 4.0 * frames[1].vectors[b][k] -
                                frames[2].vectors[b][k]) /
                               (2.0 * h);
            } else if (j == m - 1) {
                for (std::size_t k = 0; k < n; ++k)
                    dv[b][k] = (3.0 * frames[j].vectors[b][k] - 4.0 * frames[j - 1].vectors[b][k] +
                                frames[j - 2].vectors[b][k]) /
                               (2.0 * h);
            } else {
                for (std::size_t k = 0; k < n; ++k)
                    dv[b][k] = (frames[j + 1].vectors[b][k] - frames[j - 1].vectors[b][k]) /
                               (2.0 * h);
            }
        }
        for (std::size_t mm = 0; mm < n; ++mm)
            for (std::size_t nn = 0; nn < n; ++nn) {
                if (mm == nn) continue;
                const cplx elem = I_UNIT * inner(frames[j].vectors[mm], dv[nn]);
                const cplx ph = std::exp(cplx(0.0, -(gamma[mm][j] - gamma[nn][j]) +
                                                       (phase[mm][j] - phase[nn][j])));
                out[j] += (-ph * elem) * Operator::outer(frames[0].vectors[mm],
                                                         frames[0].vectors[nn]);
            }
    }
    return out;
}

Operator hermitian_part(const Operator& a) {
    Operator h = a;
    const Operator ad = a.adjoint();
    h += ad;
    h *= 0.5;
    return h;
}

}  // namespace

OperatorFn interaction_picture(const Operator& h0, OperatorFn v) {
    if (!h0.is_hermitian()) throw NotHermitian("interaction_picture: H0 is not Hermitian");
    return [h0, v = std::move(v)](double t) {
        const Operator u = unitary_exponential(h0, t);  // exp(-i H0 t)
        return u.adjoint() * v(t) * u;
    };
}

PropagatorSeries dyson_propagate(const OperatorFn& h, const TimeGrid& grid, int order,
                                 double refine_tol) {
    PropagatorSeries series{grid, dyson_partial_sums(sample_track(h, grid), grid, order)};
    if (refine_tol > 0.0) {
        const TimeGrid fine = grid.refined();
        const auto fine_sums = dyson_partial_sums(sample_track(h, fine), fine, order);
        double moved = 0.0;
        for (std::size_t k = 0; k < series.orders.size(); ++k)
            for (std::size_t j = 0; j < grid.samples; ++j)
                moved = std::max(moved, max_abs_diff(series.orders[k][j], fine_sums[k][2 * j]));
        if (moved > refine_tol)
            throw GridTooCoarse("dyson_propagate: doubling the grid moves the result by " +
                                std::to_string(moved));
    }
    return series;
}

std::vector<EigenFrame> instantaneous_frames(const OperatorFn& h, const TimeGrid& grid,
                                             double degeneracy_tol) {
    return frames_from_track(sample_track(h, grid), grid, degeneracy_tol);
}

std::vector<std::vector<double>> berry_phases(const std::vector<EigenFrame>& frames) {
    return cumulative_trapezoid(frames, false);
}

std::vector<Operator> adiabatic_propagator(const std::vector<EigenFrame>& frames) {
    return adiabatic_from_frames(frames);
}

std::vector<Operator> dual_hamiltonian(const std::vector<EigenFrame>& frames) {
    return dual_from_frames(frames);
}

PropagatorSeries dual_dyson_propagate(const OperatorFn& h, const TimeGrid& grid, int order) {
    if (order < 0 || order > 2)
        throw BadIndex("dual_dyson_propagate: order must lie in [0,2], got " +
                       std::to_string(order));
    const auto frames = instantaneous_frames(h, grid);
    const auto u_a = adiabatic_from_frames(frames);
    const auto h_prime = dual_from_frames(frames);
    auto sums = dyson_partial_sums(h_prime, grid, order);
    PropagatorSeries series;
    series.grid = grid;
    series.orders.resize(sums.size());
    for (std::size_t k = 0; k < sums.size(); ++k) {
        series.orders[k].reserve(grid.samples);
        for (std::size_t j = 0; j < grid.samples; ++j)
            series.orders[k].push_back(u_a[j] * sums[k][j]);
    }
    return series;
}

SuperadiabaticChain superadiabatic_iterate(const OperatorFn& h, const TimeGrid& grid, int steps,
                                           double involution_tol) {
    SuperadiabaticChain chain;
    std::vector<Operator> track = sample_track(h, grid);
    double scale = 0.0;
    for (const Operator& op : track) scale = std::max(scale, op.max_abs());

    for (int k = 1; k <= steps; ++k) {
        const auto frames = frames_from_track(track, grid, -1.0);
        SuperadiabaticStep step;
        step.u_a = adiabatic_from_frames(frames);
        step.h_next = dual_from_frames(frames);
        for (const Operator& op : step.h_next)
            step.residual_norm = std::max(step.residual_norm, op.max_abs());
        chain.steps.push_back(std::move(step));

        if (k >= 2) {
            double inv = 0.0;
            const auto& cur = chain.steps.back().u_a;
            const auto& prev = chain.steps[chain.steps.size() - 2].u_a;
            for (std::size_t j = 0; j < cur.size(); ++j)
                inv = std::max(inv, max_abs_diff(cur[j], prev[j].adjoint()));
            if (inv <= involution_tol) {
                chain.involution = true;
                chain.involution_step = static_cast<std::size_t>(k);
                break;
            }
        }
        if (chain.steps.back().residual_norm <= 1e-12 * std::max(scale, 1.0)) break;

        // the next iterate acts on the Hermitian part; the finite-difference
        // noise in H^{(k)} otherwise trips the eigensolver's symmetry check
        track.clear();
        track.reserve(grid.samples);
        for (const Operator& op : chain.steps.back().h_next) track.push_back(hermitian_part(op));
    }
    return chain;
}

}  // namespace qdual

#include "qdual/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qdual {

double StateVector::norm() const {
    double s = 0.0;
    for (const cplx& a : amplitudes) s += std::norm(a);
    return std::sqrt(s);
}

cplx inner(const StateVector& a, const StateVector& b) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

Operator Operator::identity(std::size_t dim) {
    Operator id(dim);
    for (std::size_t i = 0; i < dim; ++i) id(i, i) = 1.0;
    return id;
}

Operator Operator::outer(const StateVector& u, const StateVector& v) {
    Operator o(u.dim());
    for (std::size_t r = 0; r < u.dim(); ++r)
        for (std::size_t c = 0; c < v.dim(); ++c) o(r, c) = u[r] * std::conj(v[c]);
    return o;
}

Operator Operator::adjoint() const {
    Operator a(dim_);
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c) a(c, r) = std::conj((*this)(r, c));
    return a;
}

bool Operator::is_hermitian(double tol) const {
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = r; c < dim_; ++c)
            if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol) return false;
    return true;
}

bool Operator::is_unitary(double tol) const {
    const Operator g = adjoint() * (*this);
    return max_abs_diff(g, identity(dim_)) <= tol;
}

double Operator::max_abs() const {
    double m = 0.0;
    for (const cplx& e : entries_) m = std::max(m, std::abs(e));
    return m;
}

Operator& Operator::operator+=(const Operator& o) {
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += o.entries_[i];
    return *this;
}

Operator& Operator::operator-=(const Operator& o) {
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= o.entries_[i];
    return *this;
}

Operator& Operator::operator*=(cplx s) {
    for (cplx& e : entries_) e *= s;
    return *this;
}

Operator operator+(Operator a, const Operator& b) { return a += b; }
Operator operator-(Operator a, const Operator& b) { return a -= b; }
Operator operator*(cplx s, Operator a) { return a *= s; }

Operator operator*(const Operator& a, const Operator& b) {
    const std::size_t n = a.dim();
    Operator c(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t k = 0; k < n; ++k) {
            const cplx ark = a(r, k);
            if (ark == cplx{}) continue;
            for (std::size_t col = 0; col < n; ++col) c(r, col) += ark * b(k, col);
        }
    return c;
}

StateVector operator*(const Operator& a, const StateVector& v) {
    const std::size_t n = a.dim();
    StateVector w(n);
    for (std::size_t r = 0; r < n; ++r) {
        cplx s = 0.0;
        for (std::size_t c = 0; c < n; ++c) s += a(r, c) * v[c];
        w[r] = s;
    }
    return w;
}

double max_abs_diff(const Operator& a, const Operator& b) {
    double m = 0.0;
    for (std::size_t r = 0; r < a.dim(); ++r)
        for (std::size_t c = 0; c < a.dim(); ++c) m = std::max(m, std::abs(a(r, c) - b(r, c)));
    return m;
}

namespace {

double offdiag_norm(const Operator& a) {
    double s = 0.0;
    for (std::size_t r = 0; r < a.dim(); ++r)
        for (std::size_t c = 0; c < a.dim(); ++c)
            if (r != c) s += std::norm(a(r, c));
    return std::sqrt(s);
}

double frobenius(const Operator& a) {
    double s = 0.0;
    for (std::size_t r = 0; r < a.dim(); ++r)
        for (std::size_t c = 0; c < a.dim(); ++c) s += std::norm(a(r, c));
    return std::sqrt(s);
}

}  // namespace

EigenSystem hermitian_eigensystem(const Operator& a, double tol) {
    const std::size_t n = a.dim();
    if (n == 0) throw BadIndex("hermitian_eigensystem: empty matrix");
    if (!a.is_hermitian(tol)) throw NotHermitian("hermitian_eigensystem: matrix is not Hermitian");

    Operator m = a;
    Operator v = Operator::identity(n);
    const double scale = std::max(frobenius(m), 1e-300);
    const double stop = 1e-15 * scale;

    constexpr int max_sweeps = 50;
    bool converged = false;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (offdiag_norm(m) <= stop) {
            converged = true;
            break;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = m(p, q);
                const double am = std::abs(apq);
                if (am <= 1e-18 * scale) continue;

                // complex Jacobi rotation zeroing the (p,q) element:
                // columns mix with U = [[c, -conj(s)], [s, c]], s = e^{-i phase} sin(theta)
                const double app = m(p, p).real();
                const double aqq = m(q, q).real();
                const cplx phase = apq / am;  // e^{i phi}
                const double tau = (app - aqq) / (2.0 * am);
                double t;
                if (tau >= 0.0)
                    t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
                else
                    t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const cplx s = std::conj(phase) * (t * c);

                // row updates (U^dagger from the left)
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx mp = m(p, k);
                    const cplx mq = m(q, k);
                    m(p, k) = c * mp + std::conj(s) * mq;
                    m(q, k) = -s * mp + c * mq;
                }
                // column updates (U from the right), eigenvector accumulation
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx mp = m(k, p);
                    const cplx mq = m(k, q);
                    m(k, p) = c * mp + s * mq;
                    m(k, q) = -std::conj(s) * mp + c * mq;
                    const cplx vp = v(k, p);
                    const cplx vq = v(k, q);
                    v(k, p) = c * vp + s * vq;
                    v(k, q) = -std::conj(s) * vp + c * vq;
                }
                m(p, q) = 0.0;
                m(q, p) = 0.0;
                m(p, p) = cplx(m(p, p).real(), 0.0);
                m(q, q) = cplx(m(q, q).real(), 0.0);
            }
        }
    }
    if (!converged && offdiag_norm(m) > stop)
        throw NoConvergence("hermitian_eigensystem: Jacobi sweeps exhausted");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return m(i, i).real() < m(j, j).real(); });

    EigenSystem es;
    es.eigenvalues.resize(n);
    es.eigenvectors.assign(n, StateVector(n));
    for (std::size_t i = 0; i < n; ++i) {
        es.eigenvalues[i] = m(order[i], order[i]).real();
        for (std::size_t k = 0; k < n; ++k) es.eigenvectors[i][k] = v(k, order[i]);
    }

    // residual check of the advertised post-condition
    for (std::size_t i = 0; i < n; ++i) {
        StateVector av = a * es.eigenvectors[i];
        double res = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            res = std::max(res, std::abs(av[k] - es.eigenvalues[i] * es.eigenvectors[i][k]));
        if (res > 10.0 * tol * std::max(1.0, scale))
            throw NoConvergence("hermitian_eigensystem: eigenpair residual too large");
    }
    return es;
}

Operator unitary_exponential(const Operator& h, double t) {
    const EigenSystem es = hermitian_eigensystem(h);
    Operator u(h.dim());
    for (std::size_t i = 0; i < h.dim(); ++i) {
        const cplx ph = std::exp(cplx(0.0, -es.eigenvalues[i] * t));
        u += ph * Operator::outer(es.eigenvectors[i], es.eigenvectors[i]);
    }
    return u;
}

Operator pauli(int k) {
    Operator s(2);
    switch (k) {
        case 1:
            s(0, 1) = 1.0;
            s(1, 0) = 1.0;
            break;
        case 2:
            s(0, 1) = cplx(0.0, -1.0);
            s(1, 0) = cplx(0.0, 1.0);
            break;
        case 3:
            s(0, 0) = 1.0;
            s(1, 1) = -1.0;
            break;
        default:
            throw BadIndex("pauli: index must be 1, 2 or 3, got " + std::to_string(k));
    }
    return s;
}

}  // namespace qdual

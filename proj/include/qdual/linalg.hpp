#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "qdual/errors.hpp"

namespace qdual {

using cplx = std::complex<double>;

inline constexpr cplx I_UNIT{0.0, 1.0};

// N complex amplitudes of a state on a small Hilbert space.
struct StateVector {
    std::vector<cplx> amplitudes;

    StateVector() = default;
    explicit StateVector(std::size_t dim) : amplitudes(dim) {}
    StateVector(std::initializer_list<cplx> init) : amplitudes(init) {}

    std::size_t dim() const { return amplitudes.size(); }
    cplx& operator[](std::size_t i) { return amplitudes[i]; }
    const cplx& operator[](std::size_t i) const { return amplitudes[i]; }

    double norm() const;
};

// <a|b>, conjugate-linear in the first argument.
cplx inner(const StateVector& a, const StateVector& b);

// Dense square complex matrix, row-major.
struct Operator {
    Operator() = default;
    explicit Operator(std::size_t dim) : dim_(dim), entries_(dim * dim) {}

    static Operator identity(std::size_t dim);
    static Operator zero(std::size_t dim) { return Operator(dim); }
    // |u><v| outer product
    static Operator outer(const StateVector& u, const StateVector& v);

    std::size_t dim() const { return dim_; }
    cplx& operator()(std::size_t r, std::size_t c) { return entries_[r * dim_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return entries_[r * dim_ + c]; }

    Operator adjoint() const;
    bool is_hermitian(double tol = 1e-10) const;
    bool is_unitary(double tol = 1e-10) const;
    // largest entry modulus (max-norm used for all matrix comparisons)
    double max_abs() const;

    Operator& operator+=(const Operator& o);
    Operator& operator-=(const Operator& o);
    Operator& operator*=(cplx s);

  private:
    std::size_t dim_ = 0;
    std::vector<cplx> entries_;
};

Operator operator+(Operator a, const Operator& b);
Operator operator-(Operator a, const Operator& b);
Operator operator*(cplx s, Operator a);
Operator operator*(const Operator& a, const Operator& b);
StateVector operator*(const Operator& a, const StateVector& v);

// max-norm of (a - b)
double max_abs_diff(const Operator& a, const Operator& b);

struct EigenSystem {
    std::vector<double> eigenvalues;        // ascending
    std::vector<StateVector> eigenvectors;  // orthonormal, same order
};

// Cyclic Jacobi diagonalization of a Hermitian matrix. Throws NotHermitian if
// the symmetry check at `tol` fails, NoConvergence if the sweep budget is
// exhausted or the residual check A v = lambda v (within 10*tol) fails.
EigenSystem hermitian_eigensystem(const Operator& a, double tol = 1e-10);

// exp(-i H t) for Hermitian H, via the eigendecomposition.
Operator unitary_exponential(const Operator& h, double t);

// Pauli matrix sigma_k, k in {1,2,3}, in the basis |2> = (1,0), |1> = (0,1).
Operator pauli(int k);

}  // namespace qdual

#pragma once

#include <cstddef>
#include <vector>

#include "chse/bigmat/matrix.hpp"

namespace chse {

// Kronecker product in standard order: (a ⊗ b)[i*rb + k, j*cb + l] = a[i,j] b[k,l].
template <RealScalar R>
CMatrix<R> kron(const CMatrix<R>& a, const CMatrix<R>& b);

// a ⊗ a ⊗ ... (k factors), k >= 1.
template <RealScalar R>
CMatrix<R> tensor_power(const CMatrix<R>& a, int k);

// Partial trace of a square matrix on a tensor product of subsystems with the
// given dimensions, keeping the subsystems listed in `keep` (in their original
// order). Keeping nothing yields the 1x1 total trace.
template <RealScalar R>
CMatrix<R> partial_trace(const CMatrix<R>& m, const std::vector<std::size_t>& dims, const std::vector<std::size_t>& keep);

template <RealScalar R>
struct EigenSystem {
  std::vector<R> values;  // ascending
  CMatrix<R> vectors;     // columns, h = V diag(values) V†
};

// Default tolerance for treating a matrix as Hermitian: 10 ulp relative to
// max(1, max|entry|).
template <RealScalar R>
R hermitian_tolerance(const CMatrix<R>& h);

template <RealScalar R>
bool is_hermitian(const CMatrix<R>& h, const R& tol);

template <RealScalar R>
bool is_hermitian(const CMatrix<R>& h) {
  return is_hermitian(h, hermitian_tolerance(h));
}

// Eigen-decomposition of a Hermitian matrix. Inputs whose Hermiticity defect
// exceeds `tol` are rejected with NotHermitian; only the upper triangle is
// read otherwise. Double mode delegates to Eigen, big-float mode runs cyclic
// Jacobi.
template <RealScalar R>
EigenSystem<R> eig_hermitian(const CMatrix<R>& h, bool want_vectors = true);
template <RealScalar R>
EigenSystem<R> eig_hermitian(const CMatrix<R>& h, const R& tol, bool want_vectors = true);

// Cyclic Jacobi with a threshold schedule; available at both precisions so the
// two eigen-solvers can be cross-checked.
template <RealScalar R>
EigenSystem<R> eig_hermitian_jacobi(const CMatrix<R>& h, const R& tol, bool want_vectors = true);

template <RealScalar R>
std::vector<R> eigenvalues_hermitian(const CMatrix<R>& h) {
  return eig_hermitian(h, false).values;
}

// Singular values, descending, via the eigenvalues of a†a.
template <RealScalar R>
std::vector<R> singular_values(const CMatrix<R>& a);

// Sum of singular values; Hermitian inputs take the eigenvalue path.
template <RealScalar R>
R trace_norm(const CMatrix<R>& a);
// Same, with an explicit Hermiticity allowance for the fast path.
template <RealScalar R>
R trace_norm_hermitian(const CMatrix<R>& a, const R& tol);

// Largest singular value.
template <RealScalar R>
R operator_norm(const CMatrix<R>& a);

// exp(-i t h) for Hermitian h, through the eigen-decomposition.
template <RealScalar R>
CMatrix<R> expm_hermitian(const CMatrix<R>& h, const R& t);

// Column-stacking vectorisation: vec(m)[i + j*rows] = m(i, j). With this
// convention vec(A X B) = (Bᵀ ⊗ A) vec(X).
template <RealScalar R>
CMatrix<R> vec(const CMatrix<R>& m);
template <RealScalar R>
CMatrix<R> unvec(const CMatrix<R>& v, std::size_t d);

template <RealScalar R>
Complex<R> determinant(const CMatrix<R>& a);

// ‖1 - U U†‖_∞
template <RealScalar R>
R unitarity_error(const CMatrix<R>& u);

// Outer product |v><w| of two column vectors.
template <RealScalar R>
CMatrix<R> outer(const CMatrix<R>& v, const CMatrix<R>& w);

// <v|w> for column vectors.
template <RealScalar R>
Complex<R> inner(const CMatrix<R>& v, const CMatrix<R>& w);

// Principal d-th root of det(u) divided out, putting u in SU(d).
template <RealScalar R>
CMatrix<R> to_special_unitary(const CMatrix<R>& u);

// Pauli matrices and friends at a given policy.
template <RealScalar R>
CMatrix<R> pauli_x(const PrecisionPolicy& p);
template <RealScalar R>
CMatrix<R> pauli_y(const PrecisionPolicy& p);
template <RealScalar R>
CMatrix<R> pauli_z(const PrecisionPolicy& p);

}  // namespace chse

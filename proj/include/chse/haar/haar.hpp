#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "chse/bigmat/linalg.hpp"

namespace chse::haar {

// k-replica density matrix on (C^d)^{⊗k}; replica 1 is the most significant
// tensor factor.
template <RealScalar R>
struct MomentState {
  std::size_t d = 0;
  int k = 0;
  CMatrix<R> matrix;
};

// d^k, throwing ResourceLimit beyond `max_side`.
std::size_t replica_dimension(std::size_t d, int k, std::size_t max_side = 1u << 12);

// P_π on (C^d)^{⊗k}: P_π |i_1 ... i_k⟩ = |i_{π(1)} ... i_{π(k)}⟩.
template <RealScalar R>
CMatrix<R> replica_permutation(std::size_t d, const std::vector<int>& perm, const PrecisionPolicy& policy);

// (Σ_π P_π) / (d (d+1) ... (d+k-1)).
template <RealScalar R>
MomentState<R> haar_moment_state(std::size_t d, int k, const PrecisionPolicy& policy);

// (|ψ⟩⟨ψ|)^{⊗k} for a normalised column ψ.
template <RealScalar R>
MomentState<R> pure_moment(const CMatrix<R>& psi, int k);

// ½‖a − b‖₁ of two Hermitian matrices. `tol` is the Hermiticity allowance;
// negative picks the default.
template <RealScalar R>
R trace_distance(const CMatrix<R>& a, const CMatrix<R>& b, const R& tol = R(-1.0));

// Haar-random element of SU(d): Gram-Schmidt on a complex Gaussian matrix
// (which fixes the phases of the triangular factor), then the determinant is
// divided out. Gaussian draws are doubles; orthonormalisation runs at the
// policy's precision.
template <RealScalar R>
CMatrix<R> sample_haar_unitary(std::size_t d, std::mt19937_64& rng, const PrecisionPolicy& policy);
template <RealScalar R>
CMatrix<R> sample_haar_unitary(std::size_t d, std::uint64_t seed, const PrecisionPolicy& policy);

// Haar-random pure state as a d x 1 column (normalised complex Gaussian).
CMatrix<double> random_state(std::size_t d, std::mt19937_64& rng);

// Monte-Carlo estimate (1/N) Σ_i (U_i|0⟩⟨0|U_i†)^{⊗k}. Samples are drawn in
// fixed chunks with seeds derived from `seed`, and chunk sums are added in
// chunk order, so the result does not depend on `threads`.
MomentState<double> mc_haar_moment(std::size_t d, int k, std::size_t n_samples, std::uint64_t seed,
                                   unsigned threads = 1);

}  // namespace chse::haar

#pragma once

#include <random>
#include <vector>

#include "chse/haar/haar.hpp"

namespace chse::stationary {

// H = Σ E_α |α⟩⟨α| and |ψ⟩ = Σ c_α |α⟩.
template <RealScalar R>
struct HamiltonianSpec {
  CMatrix<R> H;
  std::vector<R> energies;
  CMatrix<R> basis;  // eigenvectors as columns
  std::vector<Complex<R>> overlaps;
};

template <RealScalar R>
HamiltonianSpec<R> make_hamiltonian(const CMatrix<R>& H, const CMatrix<R>& psi);

// 1/(d+1) − √(1/(2d(d+1))).
template <RealScalar R>
R bound_B(std::size_t d);

// Infinite-time 2-replica average in the eigenbasis of H:
// Σ c_α c_β c*_α' c*_β' |αβ⟩⟨α'β'| over quadruples with
// |E_α + E_β − E_α' − E_β'| ≤ 1e-10·‖H‖.
template <RealScalar R>
CMatrix<R> rho_inf_2_eigenbasis(const HamiltonianSpec<R>& ham);
// Same state in the computational basis.
template <RealScalar R>
haar::MomentState<R> rho_inf_2(const HamiltonianSpec<R>& ham);

// D[ρ] = Σ_{αβ} |αβ⟩⟨αβ| ρ M(α,β) with M(α,α) = |αα⟩⟨αα| and
// M(α,β) = |αβ⟩⟨αβ| + |αβ⟩⟨βα| otherwise, in the basis the matrix is written
// in. On replica-symmetric states this is the pinching onto span{|αβ⟩,|βα⟩}.
template <RealScalar R>
CMatrix<R> dephase2(const CMatrix<R>& rho, std::size_t d);

template <RealScalar R>
struct StationaryCertificate {
  R delta;           // ½‖ρ_Haar − ρ∞‖₁
  R dephased;        // ½‖D[ρ_Haar] − D[ρ∞]‖₁, exact trace norm
  R dephased_sum;    // ½ Σ_{αβ} | |c_α|²|c_β|² − (1+δ_αβ)/(d(d+1)) |
  R diagonal_bound;  // ½ Σ_α | |c_α|⁴ − 2/(d(d+1)) |
  R bound;           // B(d)
  bool chain_holds;  // delta ≥ dephased_sum ≥ diagonal_bound ≥ bound, up to tolerance
};

// Δ^(2)∞ with the inequality chain evaluated. `tol` is the slack allowed in
// each link.
template <RealScalar R>
StationaryCertificate<R> delta2_time_independent(const HamiltonianSpec<R>& ham, double tol = 1e-12);

// Random Hermitian matrix (GUE-like entries) and Haar-random state.
CMatrix<double> random_hermitian(std::size_t d, std::mt19937_64& rng);

// F(a) = Σ |a_n² − ξ²| on the probability simplex.
double lemma_F(const std::vector<double>& a, double xi);
// min F over the simplex grid with spacing `step` (1/step must be an
// integer). Enumerates sorted points only, F being symmetric.
double brute_min_F(std::size_t d, double xi, double step);
// ξ²(d − M) − (1 − ξM)², M = ⌊1/ξ⌋.
double lemma_family_F(std::size_t d, double xi);

}  // namespace chse::stationary

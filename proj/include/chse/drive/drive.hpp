#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "chse/bigmat/linalg.hpp"
#include "chse/haar/haar.hpp"
#include "chse/words/words.hpp"

namespace chse::drive {

// Two-gate drive U(t) = A_{ω_t} ... A_{ω_1} along the order-m word, or its
// rotation-coded variant when theta0 != 0 (turns).
template <RealScalar R>
struct DriveSpec {
  unsigned m = 1;
  std::size_t d = 2;
  CMatrix<R> A0;
  CMatrix<R> A1;
  double theta0 = 0.0;
  PrecisionPolicy policy;
};

// Validates shapes, policies and unitarity (‖1 − AA†‖ ≤ 1e3 ulp).
template <RealScalar R>
DriveSpec<R> make_spec(unsigned m, CMatrix<R> A0, CMatrix<R> A1, double theta0 = 0.0);

// First t symbols of the drive word.
words::Symbols drive_symbols(unsigned m, double theta0, std::size_t t);

// Product along an explicit symbol sequence: A_{s[t-1]} ... A_{s[0]}.
template <RealScalar R>
CMatrix<R> u_sequence(const CMatrix<R>& A0, const CMatrix<R>& A1, const words::Symbols& symbols, std::size_t t);

template <RealScalar R>
CMatrix<R> u_direct(const DriveSpec<R>& spec, std::size_t t);

// V_0 .. V_n with V_0 = A1, V_1 = A0, V_{j+1} = V_{j-1} V_j^m, so that
// V_j = U(S_j) for j ≥ 1. Needs theta0 = 0.
template <RealScalar R>
std::vector<CMatrix<R>> u_gen_fib_all(const DriveSpec<R>& spec, unsigned n);
template <RealScalar R>
CMatrix<R> u_gen_fib(const DriveSpec<R>& spec, unsigned n);

// U(T) from the Zeckendorf expansion T = Σ F_{c_i}: the largest block acts
// first, U(T) = U(F_{c_J}) ... U(F_{c_1}). m = 1 only.
template <RealScalar R>
CMatrix<R> u_zeckendorf(const DriveSpec<R>& spec, const mpz_class& T);

// Column-stacking channel matrix of ρ ↦ U^{⊗k} ρ U^{†⊗k}: conj(U^{⊗k}) ⊗ U^{⊗k}.
template <RealScalar R>
CMatrix<R> unitary_channel(const CMatrix<R>& U, int k);

template <RealScalar R>
struct AvgChannelMat {
  int k = 1;
  std::size_t d = 2;
  mpz_class T;
  CMatrix<R> matrix;
};

// (1/T) Σ_{t<T} mat(U(t)) by direct summation.
template <RealScalar R>
AvgChannelMat<R> avg_channel_direct(const DriveSpec<R>& spec, int k, std::size_t T);
template <RealScalar R>
AvgChannelMat<R> avg_channel_sequence(const CMatrix<R>& A0, const CMatrix<R>& A1, const words::Symbols& symbols, int k,
                                      std::size_t T);

struct LedgerEntry {
  unsigned n = 0;
  std::string epsilon;  // ‖1 − U(S_n)U(S_n)†‖, full precision
  double log10_epsilon = 0.0;
  unsigned bits = 53;
};

struct ErrorLedger {
  std::vector<LedgerEntry> entries;
};

// Called once per index j = 1..n with N at T = S_j and ε_j.
template <RealScalar R>
using ChannelObserver = std::function<void(unsigned j, const mpz_class& S_j, const CMatrix<R>& N, const R& eps)>;

// N at T = S_n through
//   N_{S_{j+1}} = (S_j/S_{j+1}) N_{S_j} Σ_{y<m} M_j^y + (S_{j-1}/S_{j+1}) N_{S_{j-1}} M_j^m,
// M_j = mat(U(S_j)), N_{S_0} = N_{S_1} = 1. Channel composition N ∘ U^y is the
// matrix product N·M^y (the unitary acts first).
template <RealScalar R>
AvgChannelMat<R> avg_channel_recursive(const DriveSpec<R>& spec, int k, unsigned n, ErrorLedger* ledger = nullptr,
                                       const ChannelObserver<R>& observer = {});

// unvec(N · vec((|ψ⟩⟨ψ|)^{⊗k})). ψ must be normalised to 1e-12; it is then
// renormalised at the working precision.
template <RealScalar R>
haar::MomentState<R> temporal_moment(const AvgChannelMat<R>& channel, const CMatrix<R>& psi0);
template <RealScalar R>
haar::MomentState<R> apply_channel(const CMatrix<R>& N, std::size_t d, int k, const CMatrix<R>& psi0);

// Column vector at the policy's precision, normalised there.
template <RealScalar R>
CMatrix<R> make_state(const std::vector<std::complex<double>>& amplitudes, const PrecisionPolicy& policy);

// ½‖ρ_T − ρ_Haar‖₁. `tol` widens the Hermiticity allowance (negative: default).
template <RealScalar R>
R delta_k(const haar::MomentState<R>& rho, const haar::MomentState<R>& haar_state, const R& tol = R(-1.0));

// I.i.d. symbols with P(1) = p1, from a seeded 64-bit Mersenne twister.
words::Symbols coin_sequence(double p1, std::size_t T, std::uint64_t seed);

}  // namespace chse::drive

#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "chse/drive/drive.hpp"

namespace chse::manybody {

using State = std::vector<std::complex<double>>;

// Open spin-1/2 chain with
//   H1 = Σ_j Z_j + Σ_j Z_{j-1} Z_j + edge·Z_L,  H0 the same with X,
// A0 = exp(−iτH0), A1 = exp(−iτH1). Site 1 is the most significant bit of a
// basis index.
struct ChainSpec {
  unsigned L = 8;
  double tau = 1.0;
  double edge = 0.1;
  unsigned m = 1;
};

// 2^L after checking 2 ≤ L ≤ 24.
std::size_t chain_dim(const ChainSpec& spec);

// Diagonal of H1 in the computational basis.
std::vector<double> chain_z_energies(const ChainSpec& spec);

// Dense (H0, H1); L ≤ 12.
std::pair<CMatrix<double>, CMatrix<double>> chain_hamiltonians(const ChainSpec& spec);

// Gate application on state vectors. A1 is a diagonal phase; A0 is the
// product of the commuting factors exp(−iτ c X_j) and exp(−iτ X_{j-1}X_j).
class ChainGates {
 public:
  explicit ChainGates(const ChainSpec& spec);

  const ChainSpec& spec() const { return spec_; }
  std::size_t dim() const { return dim_; }

  void apply_a0(State& psi) const;
  void apply_a1(State& psi) const;
  void apply(std::uint8_t symbol, State& psi) const { symbol ? apply_a1(psi) : apply_a0(psi); }

  // Dense matrices built column by column from the matrix-free action; L ≤ 10.
  std::pair<CMatrix<double>, CMatrix<double>> dense() const;

 private:
  struct XFactor {
    std::size_t mask;
    double c;
    double s;
  };
  ChainSpec spec_;
  std::size_t dim_;
  State phases_;
  std::vector<XFactor> factors_;
};

std::pair<CMatrix<double>, CMatrix<double>> chain_gates(const ChainSpec& spec);

// Dense drive spec for the chain (L ≤ 10).
drive::DriveSpec<double> chain_drive(const ChainSpec& spec);

// |φ⟩^{⊗L} for a normalised single-qubit state φ.
State product_state(unsigned L, std::complex<double> a0, std::complex<double> a1);
// Product of L copies of one Haar-random qubit state.
State random_product_state(unsigned L, std::mt19937_64& rng);

double state_norm(const State& psi);

}  // namespace chse::manybody

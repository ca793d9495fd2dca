#pragma once

#include <cstdint>
#include <vector>

#include "chse/manybody/chain.hpp"
#include "chse/sweep/sweep.hpp"

namespace chse::manybody {

// Time window [begin, end) of the trajectory ψ(t) = U(t)ψ0.
struct Window {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t length() const { return end - begin; }
};

// Contiguous windows covering [0, T) whose edges are log-spaced with
// `per_decade` edges per decade (duplicates after rounding merged).
std::vector<Window> log_windows(std::size_t T, int per_decade = 20);

// ψ(T) from ψ(0). Up to `dense_limit` dimensions and for m = 1 this applies
// the Zeckendorf factors U(F_c) = V_{c-1} as dense matrices; otherwise it
// steps gate by gate.
class FastForward {
 public:
  FastForward(const ChainGates& gates, std::size_t t_max, std::size_t dense_limit = 256);

  State advance(const State& psi0, std::size_t T) const;
  State step(const State& psi0, std::size_t from, std::size_t to) const;
  bool uses_zeckendorf() const { return !blocks_.empty(); }
  const words::Symbols& symbols() const { return symbols_; }

 private:
  const ChainGates* gates_;
  std::size_t t_max_;
  words::Symbols symbols_;
  std::vector<std::vector<std::complex<double>>> blocks_;  // V_j, row-major
};

struct WindowedOptions {
  int k = 1;
  std::size_t dense_limit = 1024;  // largest D^k for a dense moment
  std::size_t gram_limit = 4096;   // largest T for the Gram route
  std::size_t fast_forward_limit = 256;
  unsigned threads = 1;
};

struct WindowedSeries {
  int k = 1;
  std::size_t dim = 0;
  std::vector<Window> windows;
  // (1/len) Σ_{t in window} (|ψ(t)⟩⟨ψ(t)|)^{⊗k}; empty when D^k exceeds dense_limit.
  std::vector<CMatrix<double>> window_moments;
  // Length-weighted cumulative moment over the windows so far; same condition.
  CMatrix<double> cumulative;
  std::vector<double> delta;  // Δ^(k) of the cumulative moment at each window end
  std::vector<State> trajectory;
};

// Each window starts from a fast-forwarded ψ(T_j) and steps through its
// range; windows run in parallel and are reduced in window order.
WindowedSeries windowed_moment_series(const ChainGates& gates, const State& psi0, const std::vector<Window>& windows,
                                      const WindowedOptions& opts);
// Same quantities from one sequential pass.
WindowedSeries single_pass_series(const ChainGates& gates, const State& psi0, const std::vector<Window>& windows,
                                  const WindowedOptions& opts);

// dim of Sym^k(C^D), as a double.
double symmetric_dimension(std::size_t D, int k);

// ½‖(1/T) Σ_t (|ψ_t⟩⟨ψ_t|)^{⊗k} − P_sym/dim_sym‖₁ from the T×T Gram matrix
// ⟨ψ_s|ψ_t⟩^k / T. Needs T ≤ dim_sym.
double gram_delta(const std::vector<State>& states, std::size_t T, int k);
// Same distance for a dense moment of side D^k.
double dense_delta(const CMatrix<double>& moment, std::size_t D, int k);

struct ManybodyOptions {
  ChainSpec chain;
  int k = 1;
  std::size_t t_max = 1000;
  unsigned n_states = 10;
  std::uint64_t seed = 1;
  int per_decade = 20;
  double fit_t_min = 10.0;
  bool check_single_pass = false;
  WindowedOptions windowed;
};

struct ManybodyPoint {
  std::size_t t = 0;
  double delta = 0.0;  // mean over initial states
  std::vector<double> state_delta;
};

struct ManybodyResult {
  std::vector<Window> windows;
  std::vector<ManybodyPoint> points;
  sweep::FitResult fit;  // on (ln T, ln Δ) for T ≥ fit_t_min
  bool fit_ok = false;
  double single_pass_deviation = -1.0;  // max |Δ_windowed − Δ_single|; −1 when not checked
};

// Random product initial states |φ_s⟩^{⊗L} drawn from mix_seed(seed, s).
std::vector<State> product_initial_states(unsigned L, unsigned n_states, std::uint64_t seed);

ManybodyResult manybody_series(const ManybodyOptions& opts);

// Least squares on (t, ln Δ); gamma holds λ.
sweep::FitResult exp_fit(const std::vector<double>& t, const std::vector<double>& delta);

}  // namespace chse::manybody

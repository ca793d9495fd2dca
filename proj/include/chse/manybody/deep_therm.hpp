#pragma once

#include <cstdint>
#include <vector>

#include "chse/manybody/ensemble.hpp"

namespace chse::manybody {

// Subsystem A is the first N_A sites, so a basis index is a·d_B + b.
struct ProjectedEnsemble {
  std::size_t d_a = 0;
  std::size_t d_b = 0;
  std::vector<double> p;
  std::vector<State> states;  // normalised states on A
  std::vector<std::size_t> outcomes;
  double leakage = 0.0;  // total weight of outcomes below the cutoff
};

ProjectedEnsemble projected_ensemble(const State& psi, unsigned L, unsigned n_a, double cutoff = 1e-14);

// Σ_β p_β (|ψ_β⟩⟨ψ_β|)^{⊗k}, normalised by the retained weight.
haar::MomentState<double> projected_moment(const ProjectedEnsemble& ens, int k);
// ½‖ρ_E^(k) − ρ_Haar^(k)‖₁ on A.
double delta_E(const haar::MomentState<double>& moment);

// Mean Δ_E over Haar-random states of dimension d_a·d_b.
double haar_projected_reference(std::size_t d_a, std::size_t d_b, int k, std::size_t n_samples, std::uint64_t seed,
                                unsigned threads = 1);

struct DeepThermOptions {
  ChainSpec chain;
  unsigned n_a = 2;
  int k = 1;
  std::size_t t_max = 200;
  unsigned n_states = 4;
  std::uint64_t seed = 1;
  std::size_t ref_samples = 200;
  double plateau_from = 0.5;    // plateau = mean Δ_E over t ≥ plateau_from·t_max
  std::size_t fit_from = 1;     // the t = 0 product state is left out of the decay fit
  double window_factor = 2.0;  // decay fit stops where Δ_E first reaches window_factor·plateau
  unsigned threads = 1;
};

struct DeepThermPoint {
  std::size_t t = 0;
  double delta_E = 0.0;  // mean over initial states
  double leakage = 0.0;  // largest over initial states
};

struct DeepThermResult {
  std::vector<DeepThermPoint> points;
  double plateau = 0.0;
  double reference = 0.0;
  sweep::FitResult fit;  // gamma holds λ
  bool fit_ok = false;
};

DeepThermResult deep_therm_series(const DeepThermOptions& opts);

}  // namespace chse::manybody

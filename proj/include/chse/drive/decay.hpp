#pragma once

#include <functional>
#include <string>
#include <vector>

#include "chse/drive/drive.hpp"

namespace chse::drive {

struct DecayPoint {
  unsigned n = 0;  // Fibonacci index, 0 for plain times
  mpz_class time;
  std::string delta;  // mean over initial states, full precision
  std::vector<std::string> state_delta;
  double log_time = 0.0;  // natural logs
  double log_delta = 0.0;
  std::vector<double> state_log_delta;
  std::string epsilon;
  double log10_epsilon = 0.0;
  unsigned bits = 53;
};

struct DecaySeries {
  std::vector<DecayPoint> points;
  ErrorLedger ledger;
  unsigned bits = 53;
  int restarts = 0;
};

// Δ^(k)(S_n) for n = 1..n_max through the channel recursion, for each initial
// state. Throws LedgerViolation at the first n with ε_n > ratio·min_state Δ.
template <RealScalar R>
DecaySeries decay_series(const DriveSpec<R>& spec, int k, const std::vector<CMatrix<R>>& psi0s, unsigned n_max,
                         double ledger_ratio = 1e-3);

struct LadderOptions {
  unsigned start_bits = 256;
  unsigned max_bits = 4096;  // 53 selects hardware doubles only
  double ledger_ratio = 1e-3;
};

// decay_series with the precision ladder: start at start_bits and restart at
// doubled precision whenever the ledger rule fails, up to max_bits. The last
// LedgerViolation is rethrown if max_bits is not enough.
DecaySeries decay_series_ladder(const std::function<DriveSpec<double>()>& make_double,
                                const std::function<DriveSpec<BigFloat>(const PrecisionPolicy&)>& make_big, int k,
                                const std::vector<std::vector<std::complex<double>>>& states, unsigned n_max,
                                const LadderOptions& opts = {});

// Δ^(k)(T) at the requested times (ascending) for the product along an
// explicit symbol sequence, accumulating state moments step by step.
template <RealScalar R>
std::vector<DecayPoint> sequence_decay(const CMatrix<R>& A0, const CMatrix<R>& A1, const words::Symbols& symbols, int k,
                                       const std::vector<CMatrix<R>>& psi0s, const std::vector<std::size_t>& times);

// Distinct integers in [t_min, t_max], roughly `per_decade` per factor of ten.
std::vector<std::size_t> log_spaced_times(std::size_t t_min, std::size_t t_max, int per_decade);

}  // namespace chse::drive

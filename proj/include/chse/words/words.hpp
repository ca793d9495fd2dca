#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "chse/bigmat/scalar.hpp"
#include "chse/errors.hpp"

namespace chse::words {

using Symbols = std::vector<std::uint8_t>;

enum class WordOrigin { concatenation, rotation };

// Prefix of the infinite order-m word. theta0 is only meaningful for
// rotation-coded words.
struct FibWord {
  unsigned m = 1;
  Symbols symbols;
  WordOrigin origin = WordOrigin::concatenation;
  double theta0 = 0.0;  // turns (units of 2π)

  std::size_t size() const { return symbols.size(); }
  std::string str() const;
};

// S_0 .. S_{n_max}; S_0 = S_1 = 1, S_n = m S_{n-1} + S_{n-2}.
std::vector<mpz_class> gen_fib_numbers(unsigned m, unsigned n_max);

// First `length` symbols of the limit of W_0 = 1, W_1 = 0,
// W_{j+1} = (W_j)^m W_{j-1}.
FibWord fib_word_concat(unsigned m, std::size_t length);

// Same word continued to a longer prefix; the existing symbols are kept.
FibWord extend(const FibWord& word, std::size_t length);

// μ = (m + √(m²+4))/2 and Ω = π/m (2 + m − √(m²+4)) at the working precision
// of R (set a PolicyScope first for BigFloat).
template <RealScalar R>
R metallic_ratio(unsigned m);
template <RealScalar R>
R omega(unsigned m);

struct RotationOptions {
  // Bits used at the first attempt; 0 picks 64 + ceil(log2(length)).
  unsigned bits = 0;
  // Number of precision doublings before giving up.
  int max_doublings = 4;
  // Guard band around the interval endpoints at the first attempt, log2.
  int guard_log2 = -32;
};

// ω_n = 0 if (nΩ + θ0) mod 2π lies in [0, 2π − Ω], else 1, for n = 1..length.
// θ0 is given in units of 2π (a turn) so that special phases stay exact.
FibWord code_rotation(unsigned m, double theta0_turns, std::size_t length, const RotationOptions& opts = {});

// Number of distinct length-n factors of the prefix. Needs at least 10·n
// symbols.
std::uint64_t symbolic_complexity(const Symbols& symbols, unsigned n);

// Greedy Zeckendorf expansion T = Σ F_{c_i}, c_1 > c_2 > ..., with
// F_1 = F_2 = 1 (F_c = S_{c-1} at m = 1), c_i ≥ 2 and no two indices adjacent.
std::vector<unsigned> zeckendorf(const mpz_class& T);

// F_c for the convention above.
mpz_class fibonacci(unsigned c);

}  // namespace chse::words

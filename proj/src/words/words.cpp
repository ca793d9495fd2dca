#include "chse/words/words.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string_view>
#include <unordered_set>

#include "chse/errors.hpp"

namespace chse::words {

std::string FibWord::str() const {
  std::string s(symbols.size(), '0');
  for (std::size_t i = 0; i < symbols.size(); ++i) s[i] = static_cast<char>('0' + symbols[i]);
  return s;
}

std::vector<mpz_class> gen_fib_numbers(unsigned m, unsigned n_max) {
  if (m == 0) throw InvalidArgument("word order m must be >= 1");
  std::vector<mpz_class> s(std::max(n_max, 1u) + 1);
  s[0] = 1;
  s[1] = 1;
  for (unsigned n = 2; n <= n_max; ++n) s[n] = m * s[n - 1] + s[n - 2];
  s.resize(n_max + 1);
  return s;
}

FibWord fib_word_concat(unsigned m, std::size_t length) {
  if (m == 0) throw InvalidArgument("word order m must be >= 1");
  if (length == 0) throw InvalidArgument("word length must be >= 1");
  // Every W_j with j >= 1 is a prefix of W_{j+1}, so the last one built is a
  // prefix of the limit word.
  Symbols prev{1};
  Symbols cur{0};
  while (cur.size() < length) {
    Symbols next;
    next.reserve(m * cur.size() + prev.size());
    for (unsigned r = 0; r < m; ++r) next.insert(next.end(), cur.begin(), cur.end());
    next.insert(next.end(), prev.begin(), prev.end());
    prev = std::move(cur);
    cur = std::move(next);
  }
  cur.resize(length);
  return {m, std::move(cur), WordOrigin::concatenation, 0.0};
}

FibWord extend(const FibWord& word, std::size_t length) {
  if (length <= word.size()) return word;
  if (word.origin == WordOrigin::concatenation) return fib_word_concat(word.m, length);
  return code_rotation(word.m, word.theta0, length);
}

template <RealScalar R>
R metallic_ratio(unsigned m) {
  if (m == 0) throw InvalidArgument("word order m must be >= 1");
  const R mm(static_cast<double>(m));
  return (mm + sqrt(mm * mm + R(4.0))) / R(2.0);
}

template <RealScalar R>
R omega(unsigned m) {
  if (m == 0) throw InvalidArgument("word order m must be >= 1");
  const R mm(static_cast<double>(m));
  return RealTraits<R>::pi() / mm * (R(2.0) + mm - sqrt(mm * mm + R(4.0)));
}

template double metallic_ratio<double>(unsigned);
template BigFloat metallic_ratio<BigFloat>(unsigned);
template double omega<double>(unsigned);
template BigFloat omega<BigFloat>(unsigned);

namespace {

// One pass at fixed precision. Returns false if some point fell inside the
// guard band.
bool code_rotation_pass(unsigned m, double theta0_turns, std::size_t length, unsigned bits, long guard_log2,
                        Symbols& out, std::size_t& bad_index) {
  WorkingPrecision wp(bits);
  // Ω/2π = (2 + m − √(m²+4)) / (2m); no π needed in units of turns.
  const BigFloat mm(static_cast<double>(m));
  const BigFloat alpha = (BigFloat(2.0) + mm - sqrt(mm * mm + BigFloat(4.0))) / (BigFloat(2.0) * mm);
  const BigFloat upper = BigFloat(1.0) - alpha;  // I_0 = [0, 1 − α]
  const BigFloat phase(theta0_turns);
  const BigFloat guard = BigFloat::pow2(guard_log2);

  BigFloat x, fl, dist;
  out.assign(length, 0);
  for (std::size_t n = 1; n <= length; ++n) {
    mpfr_mul_ui(x.get(), alpha.get(), n, MPFR_RNDN);
    mpfr_add(x.get(), x.get(), phase.get(), MPFR_RNDN);
    mpfr_floor(fl.get(), x.get());
    mpfr_sub(x.get(), x.get(), fl.get(), MPFR_RNDN);  // x in [0, 1)

    // Distance to the three endpoints 0, 1 − α and 1.
    bool ambiguous = mpfr_cmp(x.get(), guard.get()) < 0;
    mpfr_sub(dist.get(), x.get(), upper.get(), MPFR_RNDN);
    const bool in_one = mpfr_sgn(dist.get()) > 0;
    mpfr_abs(dist.get(), dist.get(), MPFR_RNDN);
    ambiguous = ambiguous || mpfr_cmp(dist.get(), guard.get()) < 0;
    mpfr_ui_sub(dist.get(), 1, x.get(), MPFR_RNDN);
    ambiguous = ambiguous || mpfr_cmp(dist.get(), guard.get()) < 0;
    if (ambiguous) {
      bad_index = n;
      return false;
    }
    out[n - 1] = in_one ? 1 : 0;
  }
  return true;
}

}  // namespace

FibWord code_rotation(unsigned m, double theta0_turns, std::size_t length, const RotationOptions& opts) {
  if (m == 0) throw InvalidArgument("word order m must be >= 1");
  if (length == 0) throw InvalidArgument("word length must be >= 1");
  if (!std::isfinite(theta0_turns) || theta0_turns < 0.0 || theta0_turns >= 1.0) {
    throw InvalidArgument("rotation phase must lie in [0, 1) turns");
  }
  const unsigned log_n = static_cast<unsigned>(std::bit_width(length - 1));
  unsigned bits = opts.bits ? opts.bits : 64 + log_n;
  const unsigned base_bits = bits;
  Symbols out;
  std::size_t bad = 0;
  for (int attempt = 0; attempt <= opts.max_doublings; ++attempt) {
    // The guard band shrinks with every bit added so that doubling can
    // actually resolve a close call.
    const long guard = opts.guard_log2 - static_cast<long>(bits - base_bits);
    if (code_rotation_pass(m, theta0_turns, length, bits, guard, out, bad)) {
      return {m, std::move(out), WordOrigin::rotation, theta0_turns};
    }
    bits *= 2;
  }
  throw AmbiguousBoundary("rotation coding: symbol " + std::to_string(bad) + " stays within the guard band at " +
                          std::to_string(bits / 2) + " bits");
}

std::uint64_t symbolic_complexity(const Symbols& symbols, unsigned n) {
  if (n == 0) throw InvalidArgument("factor length must be >= 1");
  if (symbols.size() < 10ull * n) {
    throw InvalidArgument("prefix of " + std::to_string(symbols.size()) + " symbols is too short to certify length-" +
                          std::to_string(n) + " factors (need " + std::to_string(10ull * n) + ")");
  }
  const std::size_t count = symbols.size() - n + 1;
  if (n <= 64) {
    std::unordered_set<std::uint64_t> seen;
    const std::uint64_t mask = n == 64 ? ~0ull : ((1ull << n) - 1);
    std::uint64_t window = 0;
    for (std::size_t i = 0; i < symbols.size(); ++i) {
      window = ((window << 1) | symbols[i]) & mask;
      if (i + 1 >= n) seen.insert(window);
    }
    return seen.size();
  }
  std::string s(symbols.begin(), symbols.end());
  std::unordered_set<std::string_view> seen;
  for (std::size_t i = 0; i < count; ++i) seen.insert(std::string_view(s).substr(i, n));
  return seen.size();
}

mpz_class fibonacci(unsigned c) {
  if (c == 0) return 0;
  mpz_class f;
  mpz_fib_ui(f.get_mpz_t(), c);
  return f;
}

std::vector<unsigned> zeckendorf(const mpz_class& T) {
  if (T < 1) throw InvalidArgument("Zeckendorf expansion needs T >= 1");
  // Largest index with F_c <= T.
  std::vector<mpz_class> fib{0, 1, 1};
  while (fib.back() <= T) fib.push_back(fib[fib.size() - 1] + fib[fib.size() - 2]);
  std::vector<unsigned> out;
  mpz_class rest = T;
  for (unsigned c = static_cast<unsigned>(fib.size()) - 1; c >= 2 && rest > 0; --c) {
    if (fib[c] <= rest) {
      rest -= fib[c];
      out.push_back(c);
      --c;  // next index is at most c - 2
    }
  }
  return out;
}

}  // namespace chse::words

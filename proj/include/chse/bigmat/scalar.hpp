#pragma once

#include <gmpxx.h>

#include <cmath>
#include <concepts>
#include <optional>
#include <string>
#include <type_traits>

#include "chse/bigmat/bigfloat.hpp"
#include "chse/bigmat/precision.hpp"

namespace chse {

template <class R>
concept RealScalar = std::same_as<R, double> || std::same_as<R, BigFloat>;

// Makes a policy's precision the working precision while in scope.
class PolicyScope {
 public:
  explicit PolicyScope(const PrecisionPolicy& p) {
    if (p.is_big()) guard_.emplace(static_cast<mpfr_prec_t>(p.bits));
  }

 private:
  std::optional<WorkingPrecision> guard_;
};

// Double overloads in this namespace so unqualified calls in generic code do
// not convert to BigFloat.
inline double sqrt(double x) { return std::sqrt(x); }
inline double abs(double x) { return std::fabs(x); }
inline double sin(double x) { return std::sin(x); }
inline double cos(double x) { return std::cos(x); }
inline double exp(double x) { return std::exp(x); }
inline double log(double x) { return std::log(x); }
inline double atan2(double y, double x) { return std::atan2(y, x); }
inline double floor(double x) { return std::floor(x); }
inline double pow(double x, double y) { return std::pow(x, y); }
inline double hypot(double x, double y) { return std::hypot(x, y); }

template <RealScalar R>
struct RealTraits;

template <>
struct RealTraits<double> {
  static constexpr bool big = false;
  static double pi() { return M_PI; }
  static double from_mpz(const mpz_class& z) { return mpz_get_d(z.get_mpz_t()); }
  static double to_double(double x) { return x; }
  static double ulp(const PrecisionPolicy&) { return std::ldexp(1.0, -52); }
  static std::string to_decimal(double x, int digits = 17);
  static bool compatible(const PrecisionPolicy& p) { return !p.is_big(); }
};

template <>
struct RealTraits<BigFloat> {
  static constexpr bool big = true;
  static BigFloat pi() { return BigFloat::pi(); }
  static BigFloat from_mpz(const mpz_class& z) { return BigFloat(z); }
  static double to_double(const BigFloat& x) { return x.to_double(); }
  static BigFloat ulp(const PrecisionPolicy& p) { return BigFloat::pow2(1 - static_cast<long>(p.bits)); }
  static std::string to_decimal(const BigFloat& x, int digits = 0) { return x.to_string(digits); }
  static bool compatible(const PrecisionPolicy& p) { return p.is_big(); }
};

inline std::string RealTraits<double>::to_decimal(double x, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

template <RealScalar R>
double to_double(const R& x) {
  return RealTraits<R>::to_double(x);
}

// log10|x| as a double, also for magnitudes outside the double range; -inf
// for zero.
double log10_abs(double x);
double log10_abs(const BigFloat& x);

// Natural logarithm of a (possibly huge) integer, accurate to double.
double log_mpz(const mpz_class& z);

// Ratio num/den of big integers rounded to R at the working precision.
template <RealScalar R>
R mpz_ratio(const mpz_class& num, const mpz_class& den);

}  // namespace chse

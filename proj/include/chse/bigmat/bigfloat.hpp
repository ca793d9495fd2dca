#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <compare>
#include <string>

namespace chse {

// Significand bits used for BigFloat values created on this thread.
mpfr_prec_t working_bits();

// RAII guard that sets the thread's working precision for its lifetime.
class WorkingPrecision {
 public:
  explicit WorkingPrecision(mpfr_prec_t bits);
  ~WorkingPrecision();
  WorkingPrecision(const WorkingPrecision&) = delete;
  WorkingPrecision& operator=(const WorkingPrecision&) = delete;

 private:
  mpfr_prec_t saved_;
};

// Owning MPFR real. New values (including the results of arithmetic) are
// created at the thread's working precision; assignment keeps the target's
// precision. Round-to-nearest throughout.
class BigFloat {
 public:
  BigFloat();
  BigFloat(double x);  // NOLINT: implicit so generic code can write R(0.5)
  BigFloat(int x);     // NOLINT
  BigFloat(long x);    // NOLINT
  explicit BigFloat(const mpz_class& z);
  explicit BigFloat(const std::string& decimal);
  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  BigFloat& operator=(double x);
  ~BigFloat();

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

  BigFloat& operator+=(const BigFloat& o);
  BigFloat& operator-=(const BigFloat& o);
  BigFloat& operator*=(const BigFloat& o);
  BigFloat& operator/=(const BigFloat& o);

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  bool is_finite() const { return mpfr_number_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }

  // Scientific decimal string. digits == 0 means all digits the precision
  // carries.
  std::string to_string(int digits = 0) const;

  static BigFloat pi();
  // 2^exp at working precision.
  static BigFloat pow2(long exp);

  friend BigFloat operator-(const BigFloat& a);
  friend BigFloat operator+(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator-(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator*(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator/(const BigFloat& a, const BigFloat& b);
  friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }
  friend std::partial_ordering operator<=>(const BigFloat& a, const BigFloat& b);

 private:
  mpfr_t value_;
};

BigFloat sqrt(const BigFloat& x);
BigFloat abs(const BigFloat& x);
BigFloat sin(const BigFloat& x);
BigFloat cos(const BigFloat& x);
BigFloat exp(const BigFloat& x);
BigFloat log(const BigFloat& x);
BigFloat atan2(const BigFloat& y, const BigFloat& x);
BigFloat floor(const BigFloat& x);
BigFloat pow(const BigFloat& x, const BigFloat& y);
BigFloat hypot(const BigFloat& x, const BigFloat& y);

}  // namespace chse

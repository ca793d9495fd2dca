#include "chse/bigmat/bigfloat.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include "chse/bigmat/precision.hpp"
#include "chse/bigmat/scalar.hpp"
#include "chse/errors.hpp"

namespace chse {

namespace {
thread_local mpfr_prec_t g_working_bits = 53;
}

mpfr_prec_t working_bits() { return g_working_bits; }

WorkingPrecision::WorkingPrecision(mpfr_prec_t bits) : saved_(g_working_bits) {
  if (bits < MPFR_PREC_MIN || bits > MPFR_PREC_MAX) {
    throw InvalidArgument("working precision out of range: " + std::to_string(bits));
  }
  g_working_bits = bits;
}

WorkingPrecision::~WorkingPrecision() { g_working_bits = saved_; }

PrecisionPolicy PrecisionPolicy::big_float(unsigned bits) {
  if (bits < 53) throw InvalidArgument("big-float precision needs at least 53 bits, got " + std::to_string(bits));
  return {PrecisionMode::big_float, bits};
}

double PrecisionPolicy::ulp() const { return std::ldexp(1.0, 1 - static_cast<int>(bits)); }

std::string PrecisionPolicy::describe() const {
  return is_big() ? "big-float(" + std::to_string(bits) + ")" : std::string("double");
}

BigFloat::BigFloat() {
  mpfr_init2(value_, g_working_bits);
  mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(double x) {
  mpfr_init2(value_, g_working_bits);
  mpfr_set_d(value_, x, MPFR_RNDN);
}

BigFloat::BigFloat(int x) : BigFloat(static_cast<long>(x)) {}

BigFloat::BigFloat(long x) {
  mpfr_init2(value_, g_working_bits);
  mpfr_set_si(value_, x, MPFR_RNDN);
}

BigFloat::BigFloat(const mpz_class& z) {
  mpfr_init2(value_, g_working_bits);
  mpfr_set_z(value_, z.get_mpz_t(), MPFR_RNDN);
}

BigFloat::BigFloat(const std::string& decimal) {
  mpfr_init2(value_, g_working_bits);
  if (mpfr_set_str(value_, decimal.c_str(), 10, MPFR_RNDN) != 0) {
    mpfr_clear(value_);
    throw InvalidArgument("not a decimal number: '" + decimal + "'");
  }
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  // The moved-from value keeps its precision so that later assignments to it
  // (std::swap) do not round.
  mpfr_init2(value_, other.precision());
  mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) mpfr_set(value_, other.value_, MPFR_RNDN);
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  // Swapping would silently change this value's precision.
  if (precision() == other.precision()) {
    mpfr_swap(value_, other.value_);
  } else {
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(double x) {
  mpfr_set_d(value_, x, MPFR_RNDN);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

BigFloat& BigFloat::operator+=(const BigFloat& o) {
  mpfr_add(value_, value_, o.value_, MPFR_RNDN);
  return *this;
}
BigFloat& BigFloat::operator-=(const BigFloat& o) {
  mpfr_sub(value_, value_, o.value_, MPFR_RNDN);
  return *this;
}
BigFloat& BigFloat::operator*=(const BigFloat& o) {
  mpfr_mul(value_, value_, o.value_, MPFR_RNDN);
  return *this;
}
BigFloat& BigFloat::operator/=(const BigFloat& o) {
  mpfr_div(value_, value_, o.value_, MPFR_RNDN);
  return *this;
}

std::string BigFloat::to_string(int digits) const {
  if (mpfr_nan_p(value_)) return "nan";
  if (mpfr_inf_p(value_)) return mpfr_sgn(value_) > 0 ? "inf" : "-inf";
  if (digits <= 0) {
    digits = static_cast<int>(std::ceil(static_cast<double>(precision()) * std::log10(2.0))) + 1;
  }
  if (mpfr_zero_p(value_)) return "0";
  mpfr_exp_t exp10 = 0;
  std::unique_ptr<char, void (*)(char*)> raw(mpfr_get_str(nullptr, &exp10, 10, static_cast<size_t>(digits), value_, MPFR_RNDN),
                                             mpfr_free_str);
  std::string mant(raw.get());
  std::string sign;
  if (!mant.empty() && mant[0] == '-') {
    sign = "-";
    mant.erase(0, 1);
  }
  // mpfr gives 0.d1d2... x 10^exp10; print d1.d2... e(exp10-1)
  std::ostringstream out;
  out << sign << mant[0];
  if (mant.size() > 1) out << '.' << mant.substr(1);
  out << 'e' << (exp10 - 1);
  return out.str();
}

BigFloat BigFloat::pi() {
  BigFloat r;
  mpfr_const_pi(r.value_, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::pow2(long e) {
  BigFloat r;
  mpfr_set_ui_2exp(r.value_, 1, e, MPFR_RNDN);
  return r;
}

BigFloat operator-(const BigFloat& a) {
  BigFloat r;
  mpfr_neg(r.value_, a.value_, MPFR_RNDN);
  return r;
}

BigFloat operator+(const BigFloat& a, const BigFloat& b) {
  BigFloat r;
  mpfr_add(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

BigFloat operator-(const BigFloat& a, const BigFloat& b) {
  BigFloat r;
  mpfr_sub(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

BigFloat operator*(const BigFloat& a, const BigFloat& b) {
  BigFloat r;
  mpfr_mul(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

BigFloat operator/(const BigFloat& a, const BigFloat& b) {
  BigFloat r;
  mpfr_div(r.value_, a.value_, b.value_, MPFR_RNDN);
  return r;
}

std::partial_ordering operator<=>(const BigFloat& a, const BigFloat& b) {
  if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.value_, b.value_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

namespace {
template <class F>
BigFloat unary(const BigFloat& x, F f) {
  BigFloat r;
  f(r.get(), x.get(), MPFR_RNDN);
  return r;
}
}  // namespace

BigFloat sqrt(const BigFloat& x) { return unary(x, mpfr_sqrt); }
BigFloat abs(const BigFloat& x) { return unary(x, mpfr_abs); }
BigFloat sin(const BigFloat& x) { return unary(x, mpfr_sin); }
BigFloat cos(const BigFloat& x) { return unary(x, mpfr_cos); }
BigFloat exp(const BigFloat& x) { return unary(x, mpfr_exp); }
BigFloat log(const BigFloat& x) { return unary(x, mpfr_log); }

BigFloat floor(const BigFloat& x) {
  BigFloat r;
  mpfr_floor(r.get(), x.get());
  return r;
}

BigFloat atan2(const BigFloat& y, const BigFloat& x) {
  BigFloat r;
  mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
  return r;
}

BigFloat pow(const BigFloat& x, const BigFloat& y) {
  BigFloat r;
  mpfr_pow(r.get(), x.get(), y.get(), MPFR_RNDN);
  return r;
}

BigFloat hypot(const BigFloat& x, const BigFloat& y) {
  BigFloat r;
  mpfr_hypot(r.get(), x.get(), y.get(), MPFR_RNDN);
  return r;
}


double log10_abs(double x) { return x == 0.0 ? -HUGE_VAL : std::log10(std::fabs(x)); }

double log10_abs(const BigFloat& x) {
  if (x.is_zero()) return -HUGE_VAL;
  long e = 0;
  const double mant = mpfr_get_d_2exp(&e, x.get(), MPFR_RNDN);
  return std::log10(std::fabs(mant)) + static_cast<double>(e) * std::log10(2.0);
}

double log_mpz(const mpz_class& z) {
  if (sgn(z) <= 0) throw InvalidArgument("log of a non-positive integer");
  long e = 0;
  const double mant = mpz_get_d_2exp(&e, z.get_mpz_t());
  return std::log(mant) + static_cast<double>(e) * std::log(2.0);
}

template <>
double mpz_ratio<double>(const mpz_class& num, const mpz_class& den) {
  WorkingPrecision guard(80);
  BigFloat r = BigFloat(num) / BigFloat(den);
  return r.to_double();
}

template <>
BigFloat mpz_ratio<BigFloat>(const mpz_class& num, const mpz_class& den) {
  return BigFloat(num) / BigFloat(den);
}

}  // namespace chse

#pragma once

#include <ostream>

#include "chse/bigmat/scalar.hpp"

namespace chse {

// Complex number over double or BigFloat. std::complex is unspecified for
// non-builtin value types, hence this small type.
template <RealScalar R>
struct Complex {
  R re{};
  R im{};

  Complex() : re(0.0), im(0.0) {}
  Complex(R r) : re(std::move(r)), im(0.0) {}  // NOLINT
  Complex(R r, R i) : re(std::move(r)), im(std::move(i)) {}

  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Complex& operator*=(const Complex& o) {
    R r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  Complex& operator*=(const R& s) {
    re *= s;
    im *= s;
    return *this;
  }

  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Complex operator*(Complex a, const R& s) { return a *= s; }
  friend Complex operator*(const R& s, Complex a) { return a *= s; }
  friend Complex operator/(const Complex& a, const Complex& b) {
    R den = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
  }
  friend Complex operator/(const Complex& a, const R& s) { return {a.re / s, a.im / s}; }
  friend Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
  friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }
};

template <RealScalar R>
Complex<R> conj(const Complex<R>& z) {
  return {z.re, -z.im};
}

// |z|^2
template <RealScalar R>
R norm(const Complex<R>& z) {
  return z.re * z.re + z.im * z.im;
}

template <RealScalar R>
R abs(const Complex<R>& z) {
  using std::hypot;
  return hypot(z.re, z.im);
}

// e^{i phi}
template <RealScalar R>
Complex<R> polar_unit(const R& phi) {
  using std::cos;
  using std::sin;
  return {cos(phi), sin(phi)};
}

template <RealScalar R>
std::ostream& operator<<(std::ostream& os, const Complex<R>& z) {
  return os << '(' << to_double(z.re) << ',' << to_double(z.im) << ')';
}

}  // namespace chse

#pragma once

#include <complex>
#include <random>
#include <vector>

#include "chse/bigmat/linalg.hpp"

namespace testing {

using chse::CMatrix;
using chse::PrecisionPolicy;

inline PrecisionPolicy dbl() { return PrecisionPolicy::hardware_double(); }

inline std::vector<std::complex<double>> gaussian_values(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<std::complex<double>> v(n);
  for (auto& x : v) x = {g(rng), g(rng)};
  return v;
}

template <class R = double>
CMatrix<R> random_matrix(std::size_t r, std::size_t c, std::uint64_t seed, const PrecisionPolicy& p = dbl()) {
  const auto v = gaussian_values(r * c, seed);
  return CMatrix<R>::from_values(r, c, v, p);
}

template <class R = double>
CMatrix<R> random_hermitian(std::size_t n, std::uint64_t seed, const PrecisionPolicy& p = dbl()) {
  chse::PolicyScope scope(p);
  const auto a = random_matrix<R>(n, n, seed, p);
  CMatrix<R> h = a + a.adjoint();
  h *= R(0.5);
  return h;
}

// Random density matrix a a† / tr(a a†).
inline CMatrix<double> random_density(std::size_t n, std::uint64_t seed) {
  const auto a = random_matrix(n, n, seed);
  CMatrix<double> rho = a * a.adjoint();
  rho *= 1.0 / rho.trace().re;
  return rho;
}

inline CMatrix<double> mat(std::size_t r, std::size_t c, std::vector<std::complex<double>> v) {
  return CMatrix<double>::from_values(r, c, v, dbl());
}

inline CMatrix<double> column(const std::vector<std::complex<double>>& v) { return mat(v.size(), 1, v); }

}  // namespace testing

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "chse/bigmat/complex.hpp"
#include "chse/errors.hpp"

namespace chse {

// Dense complex matrix, row-major storage, entries at the precision of its
// policy. Value type: copies are deep.
template <RealScalar R>
class CMatrix {
 public:
  using Scalar = Complex<R>;

  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols, const PrecisionPolicy& policy);

  static CMatrix zeros(std::size_t rows, std::size_t cols, const PrecisionPolicy& policy) {
    return CMatrix(rows, cols, policy);
  }
  static CMatrix identity(std::size_t n, const PrecisionPolicy& policy);
  // Entries given row-major as double-precision literals.
  static CMatrix from_values(std::size_t rows, std::size_t cols, std::span<const std::complex<double>> values,
                             const PrecisionPolicy& policy);
  static CMatrix diagonal(std::span<const std::complex<double>> diag, const PrecisionPolicy& policy);
  static CMatrix column(std::span<const Scalar> v, const PrecisionPolicy& policy);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool is_square() const { return rows_ == cols_; }
  bool empty() const { return data_.empty(); }
  const PrecisionPolicy& policy() const { return policy_; }

  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<Scalar> data() { return data_; }
  std::span<const Scalar> data() const { return data_; }

  CMatrix adjoint() const;
  CMatrix transpose() const;
  CMatrix conjugate() const;
  Scalar trace() const;
  // max_ij |m_ij|
  R max_abs() const;
  // max_ij |m_ij - conj(m_ji)|
  R hermiticity_defect() const;
  // Same values rounded to another policy (double <-> big-float conversions go
  // through convert()).
  CMatrix with_policy(const PrecisionPolicy& p) const;

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(const Scalar& s);
  CMatrix& operator*=(const R& s);

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, const Scalar& s) { return a *= s; }
  friend CMatrix operator*(const Scalar& s, CMatrix a) { return a *= s; }
  friend CMatrix operator*(CMatrix a, const R& s) { return a *= s; }
  friend CMatrix operator*(const R& s, CMatrix a) { return a *= s; }
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b) { return multiply(a, b); }

  static CMatrix multiply(const CMatrix& a, const CMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  PrecisionPolicy policy_{};
  std::vector<Scalar> data_;
};

void require_same_policy(const PrecisionPolicy& a, const PrecisionPolicy& b, const char* op);

// Entrywise conversion between scalar types.
template <RealScalar To, RealScalar From>
CMatrix<To> convert(const CMatrix<From>& m, const PrecisionPolicy& target);

// max_ij |a_ij - b_ij| as a double.
template <RealScalar R>
double max_abs_diff(const CMatrix<R>& a, const CMatrix<R>& b);

template <>
CMatrix<double> CMatrix<double>::multiply(const CMatrix& a, const CMatrix& b);
template <>
CMatrix<BigFloat> CMatrix<BigFloat>::multiply(const CMatrix& a, const CMatrix& b);

extern template class CMatrix<double>;
extern template class CMatrix<BigFloat>;

}  // namespace chse

#include "chse/bigmat/matrix.hpp"

#include <algorithm>
#include <string>

namespace chse {

void require_same_policy(const PrecisionPolicy& a, const PrecisionPolicy& b, const char* op) {
  if (!(a == b)) {
    throw PolicyMismatch(std::string(op) + ": mixing " + a.describe() + " with " + b.describe());
  }
}

namespace {
void require_same_shape(std::size_t r1, std::size_t c1, std::size_t r2, std::size_t c2, const char* op) {
  if (r1 != r2 || c1 != c2) {
    throw DimensionError(std::string(op) + ": shape " + std::to_string(r1) + "x" + std::to_string(c1) + " vs " +
                         std::to_string(r2) + "x" + std::to_string(c2));
  }
}
}  // namespace

template <RealScalar R>
CMatrix<R>::CMatrix(std::size_t rows, std::size_t cols, const PrecisionPolicy& policy)
    : rows_(rows), cols_(cols), policy_(policy) {
  if (!RealTraits<R>::compatible(policy)) {
    throw PolicyMismatch("matrix scalar type does not match policy " + policy.describe());
  }
  PolicyScope scope(policy_);
  data_.resize(rows * cols);
}

template <RealScalar R>
CMatrix<R> CMatrix<R>::identity(std::size_t n, const PrecisionPolicy& policy) {
  CMatrix m(n, n, policy);
  PolicyScope scope(policy);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar(R(1.0));
  return m;
}

template <RealScalar R>
CMatrix<R> CMatrix<R>::from_values(std::size_t rows, std::size_t cols, std::span<const std::complex<double>> values,
                                   const PrecisionPolicy& policy) {
  if (values.size() != rows * cols) throw DimensionError("from_values: wrong number of entries");
  CMatrix m(rows, cols, policy);
  PolicyScope scope(policy);
  for (std::size_t i = 0; i < values.size(); ++i) m.data_[i] = Scalar(R(values[i].real()), R(values[i].imag()));
  return m;
}

template <RealScalar R>
CMatrix<R> CMatrix<R>::diagonal(std::span<const std::complex<double>> diag, const PrecisionPolicy& policy) {
  CMatrix m(diag.size(), diag.size(), policy);
  PolicyScope scope(policy);
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = Scalar(R(diag[i].real()), R(diag[i].imag()));
  return m;
}

template <RealScalar R>
CMatrix<R> CMatrix<R>::column(std::span<const Scalar> v, const PrecisionPolicy& policy) {
  CMatrix m(v.size(), 1, policy);
  PolicyScope scope(policy);
  for (std::size_t i = 0; i < v.size(); ++i) m.data_[i] = v[i];
  return m;
}

template <RealScalar R>
CMatrix<R> CMatrix<R>::adjoint() const {
  PolicyScope scope(policy_);
  CMatrix out(cols_, rows_, policy_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = conj((*this)(i, j));
  return out;
}

template <RealScalar R>
CMatrix<R> CMatrix<R>::transpose() const {
  PolicyScope scope(policy_);
  CMatrix out(cols_, rows_, policy_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

template <RealScalar R>
CMatrix<R> CMatrix<R>::conjugate() const {
  PolicyScope scope(policy_);
  CMatrix out = *this;
  for (auto& z : out.data_) z.im = -z.im;
  return out;
}

template <RealScalar R>
typename CMatrix<R>::Scalar CMatrix<R>::trace() const {
  if (!is_square()) throw DimensionError("trace of non-square matrix");
  PolicyScope scope(policy_);
  Scalar t;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

template <RealScalar R>
R CMatrix<R>::max_abs() const {
  PolicyScope scope(policy_);
  R best(0.0);
  for (const auto& z : data_) {
    R a = abs(z);
    if (a > best) best = a;
  }
  return best;
}

template <RealScalar R>
R CMatrix<R>::hermiticity_defect() const {
  if (!is_square()) throw DimensionError("hermiticity of non-square matrix");
  PolicyScope scope(policy_);
  R worst(0.0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i; j < cols_; ++j) {
      R a = abs((*this)(i, j) - conj((*this)(j, i)));
      if (a > worst) worst = a;
    }
  return worst;
}

template <RealScalar R>
CMatrix<R> CMatrix<R>::with_policy(const PrecisionPolicy& p) const {
  return convert<R, R>(*this, p);
}

template <RealScalar R>
CMatrix<R>& CMatrix<R>::operator+=(const CMatrix& o) {
  require_same_policy(policy_, o.policy_, "matrix add");
  require_same_shape(rows_, cols_, o.rows_, o.cols_, "matrix add");
  PolicyScope scope(policy_);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

template <RealScalar R>
CMatrix<R>& CMatrix<R>::operator-=(const CMatrix& o) {
  require_same_policy(policy_, o.policy_, "matrix subtract");
  require_same_shape(rows_, cols_, o.rows_, o.cols_, "matrix subtract");
  PolicyScope scope(policy_);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

template <RealScalar R>
CMatrix<R>& CMatrix<R>::operator*=(const Scalar& s) {
  PolicyScope scope(policy_);
  for (auto& z : data_) z *= s;
  return *this;
}

template <RealScalar R>
CMatrix<R>& CMatrix<R>::operator*=(const R& s) {
  PolicyScope scope(policy_);
  for (auto& z : data_) z *= s;
  return *this;
}

template <>
CMatrix<double> CMatrix<double>::multiply(const CMatrix& a, const CMatrix& b) {
  require_same_policy(a.policy_, b.policy_, "matrix multiply");
  if (a.cols_ != b.rows_) throw DimensionError("matrix multiply: inner dimensions differ");
  CMatrix out(a.rows_, b.cols_, a.policy_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Scalar aik = a(i, k);
      if (aik.re == 0.0 && aik.im == 0.0) continue;
      const Scalar* brow = &b.data_[k * b.cols_];
      Scalar* orow = &out.data_[i * out.cols_];
      for (std::size_t j = 0; j < b.cols_; ++j) {
        orow[j].re += aik.re * brow[j].re - aik.im * brow[j].im;
        orow[j].im += aik.re * brow[j].im + aik.im * brow[j].re;
      }
    }
  }
  return out;
}

// Raw MPFR kernel: the operator-based path allocates a temporary per product.
template <>
CMatrix<BigFloat> CMatrix<BigFloat>::multiply(const CMatrix& a, const CMatrix& b) {
  require_same_policy(a.policy_, b.policy_, "matrix multiply");
  if (a.cols_ != b.rows_) throw DimensionError("matrix multiply: inner dimensions differ");
  PolicyScope scope(a.policy_);
  CMatrix out(a.rows_, b.cols_, a.policy_);
  BigFloat t1, t2;
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Scalar& aik = a(i, k);
      if (aik.re.is_zero() && aik.im.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        const Scalar& bkj = b(k, j);
        Scalar& o = out(i, j);
        mpfr_mul(t1.get(), aik.re.get(), bkj.re.get(), MPFR_RNDN);
        mpfr_mul(t2.get(), aik.im.get(), bkj.im.get(), MPFR_RNDN);
        mpfr_sub(t1.get(), t1.get(), t2.get(), MPFR_RNDN);
        mpfr_add(o.re.get(), o.re.get(), t1.get(), MPFR_RNDN);
        mpfr_mul(t1.get(), aik.re.get(), bkj.im.get(), MPFR_RNDN);
        mpfr_mul(t2.get(), aik.im.get(), bkj.re.get(), MPFR_RNDN);
        mpfr_add(t1.get(), t1.get(), t2.get(), MPFR_RNDN);
        mpfr_add(o.im.get(), o.im.get(), t1.get(), MPFR_RNDN);
      }
    }
  }
  return out;
}

template <RealScalar To, RealScalar From>
CMatrix<To> convert(const CMatrix<From>& m, const PrecisionPolicy& target) {
  CMatrix<To> out(m.rows(), m.cols(), target);
  PolicyScope scope(target);
  auto src = m.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) {
    if constexpr (std::is_same_v<To, From>) {
      dst[i].re = src[i].re;
      dst[i].im = src[i].im;
    } else if constexpr (std::is_same_v<To, double>) {
      dst[i] = Complex<double>(src[i].re.to_double(), src[i].im.to_double());
    } else {
      dst[i] = Complex<BigFloat>(BigFloat(src[i].re), BigFloat(src[i].im));
    }
  }
  return out;
}

template <RealScalar R>
double max_abs_diff(const CMatrix<R>& a, const CMatrix<R>& b) {
  require_same_policy(a.policy(), b.policy(), "max_abs_diff");
  require_same_shape(a.rows(), a.cols(), b.rows(), b.cols(), "max_abs_diff");
  PolicyScope scope(a.policy());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, to_double(abs(a.data()[i] - b.data()[i])));
  }
  return worst;
}

template class CMatrix<double>;
template class CMatrix<BigFloat>;
template CMatrix<double> convert<double, double>(const CMatrix<double>&, const PrecisionPolicy&);
template CMatrix<double> convert<double, BigFloat>(const CMatrix<BigFloat>&, const PrecisionPolicy&);
template CMatrix<BigFloat> convert<BigFloat, double>(const CMatrix<double>&, const PrecisionPolicy&);
template CMatrix<BigFloat> convert<BigFloat, BigFloat>(const CMatrix<BigFloat>&, const PrecisionPolicy&);
template double max_abs_diff(const CMatrix<double>&, const CMatrix<double>&);
template double max_abs_diff(const CMatrix<BigFloat>&, const CMatrix<BigFloat>&);

}  // namespace chse

#include "chse/bigmat/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>
#include <string>

namespace chse {

template <RealScalar R>
CMatrix<R> kron(const CMatrix<R>& a, const CMatrix<R>& b) {
  require_same_policy(a.policy(), b.policy(), "kron");
  PolicyScope scope(a.policy());
  const std::size_t rb = b.rows(), cb = b.cols();
  CMatrix<R> out(a.rows() * rb, a.cols() * cb, a.policy());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const auto& aij = a(i, j);
      if (aij == Complex<R>()) continue;
      for (std::size_t k = 0; k < rb; ++k)
        for (std::size_t l = 0; l < cb; ++l) out(i * rb + k, j * cb + l) = aij * b(k, l);
    }
  return out;
}

template <RealScalar R>
CMatrix<R> tensor_power(const CMatrix<R>& a, int k) {
  if (k < 1) throw InvalidArgument("tensor_power: k must be >= 1, got " + std::to_string(k));
  CMatrix<R> out = a;
  for (int i = 1; i < k; ++i) out = kron(out, a);
  return out;
}

template <RealScalar R>
CMatrix<R> partial_trace(const CMatrix<R>& m, const std::vector<std::size_t>& dims, const std::vector<std::size_t>& keep) {
  if (!m.is_square()) throw DimensionError("partial_trace: matrix not square");
  const std::size_t n_sub = dims.size();
  std::size_t total = 1;
  for (auto d : dims) {
    if (d == 0) throw DimensionError("partial_trace: zero subsystem dimension");
    total *= d;
  }
  if (total != m.rows()) {
    throw DimensionError("partial_trace: dims multiply to " + std::to_string(total) + " but matrix side is " +
                         std::to_string(m.rows()));
  }
  std::vector<bool> kept(n_sub, false);
  for (auto s : keep) {
    if (s >= n_sub || kept[s]) throw DimensionError("partial_trace: bad keep index");
    kept[s] = true;
  }
  // Split each full index into (kept index, traced index), subsystem 0 most significant.
  std::vector<std::size_t> kept_idx(total), traced_idx(total);
  std::size_t kept_dim = 1, traced_dim = 1;
  for (std::size_t s = 0; s < n_sub; ++s) (kept[s] ? kept_dim : traced_dim) *= dims[s];
  for (std::size_t full = 0; full < total; ++full) {
    std::size_t rem = full, stride = total, ki = 0, ti = 0;
    for (std::size_t s = 0; s < n_sub; ++s) {
      stride /= dims[s];
      const std::size_t digit = rem / stride;
      rem %= stride;
      if (kept[s]) {
        ki = ki * dims[s] + digit;
      } else {
        ti = ti * dims[s] + digit;
      }
    }
    kept_idx[full] = ki;
    traced_idx[full] = ti;
  }
  std::vector<std::vector<std::size_t>> by_traced(traced_dim);
  for (std::size_t full = 0; full < total; ++full) by_traced[traced_idx[full]].push_back(full);

  PolicyScope scope(m.policy());
  CMatrix<R> out(kept_dim, kept_dim, m.policy());
  for (const auto& group : by_traced)
    for (auto i : group)
      for (auto j : group) out(kept_idx[i], kept_idx[j]) += m(i, j);
  return out;
}

template <RealScalar R>
R hermitian_tolerance(const CMatrix<R>& h) {
  PolicyScope scope(h.policy());
  R scale = h.max_abs();
  if (scale < R(1.0)) scale = R(1.0);
  return R(10.0) * RealTraits<R>::ulp(h.policy()) * scale;
}

template <RealScalar R>
bool is_hermitian(const CMatrix<R>& h, const R& tol) {
  if (!h.is_square()) return false;
  return !(h.hermiticity_defect() > tol);
}

namespace {

template <RealScalar R>
void require_hermitian(const CMatrix<R>& h, const R& tol, const char* op) {
  if (!h.is_square()) throw DimensionError(std::string(op) + ": matrix not square");
  const R defect = h.hermiticity_defect();
  if (defect > tol) {
    throw NotHermitian(std::string(op) + ": hermiticity defect " + RealTraits<R>::to_decimal(defect) +
                       " exceeds tolerance " + RealTraits<R>::to_decimal(tol));
  }
}

template <RealScalar R>
void sort_ascending(EigenSystem<R>& es, bool want_vectors) {
  const std::size_t n = es.values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return es.values[a] < es.values[b]; });
  std::vector<R> values;
  values.reserve(n);
  for (auto i : order) values.push_back(es.values[i]);
  es.values = std::move(values);
  if (want_vectors) {
    CMatrix<R> v(n, n, es.vectors.policy());
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t r = 0; r < n; ++r) v(r, c) = es.vectors(r, order[c]);
    es.vectors = std::move(v);
  }
}

}  // namespace

template <RealScalar R>
EigenSystem<R> eig_hermitian_jacobi(const CMatrix<R>& h, const R& tol, bool want_vectors) {
  require_hermitian(h, tol, "eig_hermitian");
  PolicyScope scope(h.policy());
  const std::size_t n = h.rows();
  // Work on the Hermitian matrix defined by the upper triangle.
  CMatrix<R> a(n, n, h.policy());
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = Complex<R>(h(i, i).re);
    for (std::size_t j = i + 1; j < n; ++j) {
      a(i, j) = h(i, j);
      a(j, i) = conj(h(i, j));
    }
  }
  CMatrix<R> v = want_vectors ? CMatrix<R>::identity(n, h.policy()) : CMatrix<R>();
  const R ulp = RealTraits<R>::ulp(h.policy());

  R frob(0.0);
  for (const auto& z : a.data()) frob += norm(z);
  frob = sqrt(frob);

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    R off(0.0);
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += norm(a(p, q));
    off = sqrt(off);
    if (!(off > ulp * frob * R(0.25))) break;
    // Threshold schedule: skip small elements in the first sweeps.
    const R thresh = sweep < 3 ? R(0.2) * off / R(static_cast<double>(n * n)) : R(0.0);
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const R apq = abs(a(p, q));
        if (!(apq > thresh) || apq == R(0.0)) continue;
        const R app = a(p, p).re;
        const R aqq = a(q, q).re;
        if (sweep > 3 && apq < ulp * R(0.5) * (abs(app) + abs(aqq))) {
          a(p, q) = Complex<R>();
          a(q, p) = Complex<R>();
          continue;
        }
        // e^{i phi} = conj(a_pq)/|a_pq| turns the pivot real and positive.
        const Complex<R> phase = conj(a(p, q)) / apq;
        const R theta = (aqq - app) / (R(2.0) * apq);
        R t = R(1.0) / (abs(theta) + sqrt(theta * theta + R(1.0)));
        if (theta < R(0.0)) t = -t;
        const R c = R(1.0) / sqrt(t * t + R(1.0));
        const R s = t * c;
        // J = [[c, s], [-s e^{i phi}, c e^{i phi}]] on (p, q); A <- J† A J.
        const Complex<R> jqp = -(phase * s);
        const Complex<R> jqq = phase * c;
        for (std::size_t k = 0; k < n; ++k) {
          const Complex<R> akp = a(k, p);
          const Complex<R> akq = a(k, q);
          a(k, p) = akp * c + akq * jqp;
          a(k, q) = akp * s + akq * jqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex<R> apk = a(p, k);
          const Complex<R> aqk = a(q, k);
          a(p, k) = apk * c + aqk * conj(jqp);
          a(q, k) = apk * s + aqk * conj(jqq);
        }
        a(p, q) = Complex<R>();
        a(q, p) = Complex<R>();
        a(p, p).im = R(0.0);
        a(q, q).im = R(0.0);
        if (want_vectors) {
          for (std::size_t k = 0; k < n; ++k) {
            const Complex<R> vkp = v(k, p);
            const Complex<R> vkq = v(k, q);
            v(k, p) = vkp * c + vkq * jqp;
            v(k, q) = vkp * s + vkq * jqq;
          }
        }
      }
    }
  }
  EigenSystem<R> es;
  es.values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) es.values.push_back(a(i, i).re);
  if (want_vectors) es.vectors = std::move(v);
  sort_ascending(es, want_vectors);
  return es;
}

namespace {

EigenSystem<double> eig_eigen(const CMatrix<double>& h, bool want_vectors) {
  const std::size_t n = h.rows();
  Eigen::MatrixXcd m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = {h(i, i).re, 0.0};
    for (std::size_t j = i + 1; j < n; ++j) {
      m(i, j) = {h(i, j).re, h(i, j).im};
      m(j, i) = std::conj(m(i, j));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, want_vectors ? Eigen::ComputeEigenvectors
                                                                          : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw InternalError("Eigen self-adjoint solver did not converge");
  EigenSystem<double> es;
  es.values.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  if (want_vectors) {
    es.vectors = CMatrix<double>(n, n, h.policy());
    const auto& vec = solver.eigenvectors();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) es.vectors(i, j) = {vec(i, j).real(), vec(i, j).imag()};
  }
  return es;  // Eigen already sorts ascending
}

}  // namespace

template <RealScalar R>
EigenSystem<R> eig_hermitian(const CMatrix<R>& h, const R& tol, bool want_vectors) {
  if constexpr (RealTraits<R>::big) {
    return eig_hermitian_jacobi(h, tol, want_vectors);
  } else {
    require_hermitian(h, tol, "eig_hermitian");
    return eig_eigen(h, want_vectors);
  }
}

template <RealScalar R>
EigenSystem<R> eig_hermitian(const CMatrix<R>& h, bool want_vectors) {
  if (!h.is_square()) throw DimensionError("eig_hermitian: matrix not square");
  return eig_hermitian(h, hermitian_tolerance(h), want_vectors);
}

template <RealScalar R>
std::vector<R> singular_values(const CMatrix<R>& a) {
  if (!a.is_square()) throw DimensionError("singular values: matrix not square");
  PolicyScope scope(a.policy());
  // a†a is Hermitian bit-for-bit with the product kernels used here.
  const CMatrix<R> gram = a.adjoint() * a;
  auto vals = eig_hermitian(gram, false).values;
  std::vector<R> out;
  out.reserve(vals.size());
  for (auto it = vals.rbegin(); it != vals.rend(); ++it) out.push_back(*it > R(0.0) ? sqrt(*it) : R(0.0));
  return out;
}

template <RealScalar R>
R trace_norm_hermitian(const CMatrix<R>& a, const R& tol) {
  PolicyScope scope(a.policy());
  R sum(0.0);
  for (const auto& l : eig_hermitian(a, tol, false).values) sum += abs(l);
  return sum;
}

template <RealScalar R>
R trace_norm(const CMatrix<R>& a) {
  if (!a.is_square()) throw DimensionError("trace_norm: matrix not square");
  PolicyScope scope(a.policy());
  const R tol = hermitian_tolerance(a);
  if (is_hermitian(a, tol)) return trace_norm_hermitian(a, tol);
  R sum(0.0);
  for (const auto& s : singular_values(a)) sum += s;
  return sum;
}

template <RealScalar R>
R operator_norm(const CMatrix<R>& a) {
  if (!a.is_square()) throw DimensionError("operator_norm: matrix not square");
  PolicyScope scope(a.policy());
  const R tol = hermitian_tolerance(a);
  if (is_hermitian(a, tol)) {
    const auto vals = eig_hermitian(a, tol, false).values;
    if (vals.empty()) return R(0.0);
    const R lo = abs(vals.front());
    const R hi = abs(vals.back());
    return lo > hi ? lo : hi;
  }
  const auto sv = singular_values(a);
  return sv.empty() ? R(0.0) : sv.front();
}

template <RealScalar R>
CMatrix<R> expm_hermitian(const CMatrix<R>& h, const R& t) {
  PolicyScope scope(h.policy());
  const auto es = eig_hermitian(h, true);
  const std::size_t n = h.rows();
  CMatrix<R> scaled = es.vectors;
  for (std::size_t j = 0; j < n; ++j) {
    const Complex<R> phase = polar_unit(R(-(t * es.values[j])));
    for (std::size_t i = 0; i < n; ++i) scaled(i, j) *= phase;
  }
  return scaled * es.vectors.adjoint();
}

template <RealScalar R>
CMatrix<R> vec(const CMatrix<R>& m) {
  if (!m.is_square()) throw DimensionError("vec: matrix not square");
  PolicyScope scope(m.policy());
  const std::size_t n = m.rows();
  CMatrix<R> v(n * n, 1, m.policy());
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) v(i + j * n, 0) = m(i, j);
  return v;
}

template <RealScalar R>
CMatrix<R> unvec(const CMatrix<R>& v, std::size_t d) {
  if (v.cols() != 1 || v.rows() != d * d) {
    throw DimensionError("unvec: expected a column of length " + std::to_string(d * d));
  }
  PolicyScope scope(v.policy());
  CMatrix<R> m(d, d, v.policy());
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < d; ++i) m(i, j) = v(i + j * d, 0);
  return m;
}

template <RealScalar R>
Complex<R> determinant(const CMatrix<R>& a) {
  if (!a.is_square()) throw DimensionError("determinant: matrix not square");
  PolicyScope scope(a.policy());
  CMatrix<R> lu = a;
  const std::size_t n = a.rows();
  Complex<R> det(R(1.0));
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    R best = abs(lu(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      R cand = abs(lu(r, col));
      if (cand > best) {
        best = cand;
        pivot = r;
      }
    }
    if (best == R(0.0)) return Complex<R>();
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(lu(col, c), lu(pivot, c));
      det = -det;
    }
    det *= lu(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const Complex<R> f = lu(r, col) / lu(col, col);
      for (std::size_t c = col; c < n; ++c) lu(r, c) -= f * lu(col, c);
    }
  }
  return det;
}

template <RealScalar R>
R unitarity_error(const CMatrix<R>& u) {
  PolicyScope scope(u.policy());
  return operator_norm(CMatrix<R>::identity(u.rows(), u.policy()) - u * u.adjoint());
}

template <RealScalar R>
CMatrix<R> outer(const CMatrix<R>& v, const CMatrix<R>& w) {
  if (v.cols() != 1 || w.cols() != 1) throw DimensionError("outer: expected column vectors");
  return v * w.adjoint();
}

template <RealScalar R>
Complex<R> inner(const CMatrix<R>& v, const CMatrix<R>& w) {
  if (v.cols() != 1 || w.cols() != 1 || v.rows() != w.rows()) throw DimensionError("inner: expected matching columns");
  require_same_policy(v.policy(), w.policy(), "inner");
  PolicyScope scope(v.policy());
  Complex<R> s;
  for (std::size_t i = 0; i < v.rows(); ++i) s += conj(v(i, 0)) * w(i, 0);
  return s;
}

template <RealScalar R>
CMatrix<R> to_special_unitary(const CMatrix<R>& u) {
  PolicyScope scope(u.policy());
  const Complex<R> det = determinant(u);
  const R n = R(static_cast<double>(u.rows()));
  const R mag = pow(abs(det), R(1.0) / n);
  const R arg = atan2(det.im, det.re) / n;
  const Complex<R> root = polar_unit(arg) * mag;
  return u * (Complex<R>(R(1.0)) / root);
}

template <RealScalar R>
CMatrix<R> pauli_x(const PrecisionPolicy& p) {
  const std::complex<double> v[] = {0.0, 1.0, 1.0, 0.0};
  return CMatrix<R>::from_values(2, 2, v, p);
}

template <RealScalar R>
CMatrix<R> pauli_y(const PrecisionPolicy& p) {
  const std::complex<double> v[] = {0.0, {0.0, -1.0}, {0.0, 1.0}, 0.0};
  return CMatrix<R>::from_values(2, 2, v, p);
}

template <RealScalar R>
CMatrix<R> pauli_z(const PrecisionPolicy& p) {
  const std::complex<double> v[] = {1.0, 0.0, 0.0, -1.0};
  return CMatrix<R>::from_values(2, 2, v, p);
}

#define CHSE_INSTANTIATE_LINALG(R)                                                                            \
  template CMatrix<R> kron(const CMatrix<R>&, const CMatrix<R>&);                                            \
  template CMatrix<R> tensor_power(const CMatrix<R>&, int);                                                  \
  template CMatrix<R> partial_trace(const CMatrix<R>&, const std::vector<std::size_t>&,                      \
                                    const std::vector<std::size_t>&);                                       \
  template R hermitian_tolerance(const CMatrix<R>&);                                                         \
  template bool is_hermitian(const CMatrix<R>&, const R&);                                                   \
  template EigenSystem<R> eig_hermitian(const CMatrix<R>&, bool);                                           \
  template EigenSystem<R> eig_hermitian(const CMatrix<R>&, const R&, bool);                                 \
  template EigenSystem<R> eig_hermitian_jacobi(const CMatrix<R>&, const R&, bool);                          \
  template std::vector<R> singular_values(const CMatrix<R>&);                                                \
  template R trace_norm(const CMatrix<R>&);                                                                  \
  template R trace_norm_hermitian(const CMatrix<R>&, const R&);                                              \
  template R operator_norm(const CMatrix<R>&);                                                               \
  template CMatrix<R> expm_hermitian(const CMatrix<R>&, const R&);                                           \
  template CMatrix<R> vec(const CMatrix<R>&);                                                                \
  template CMatrix<R> unvec(const CMatrix<R>&, std::size_t);                                                 \
  template Complex<R> determinant(const CMatrix<R>&);                                                        \
  template R unitarity_error(const CMatrix<R>&);                                                             \
  template CMatrix<R> outer(const CMatrix<R>&, const CMatrix<R>&);                                           \
  template Complex<R> inner(const CMatrix<R>&, const CMatrix<R>&);                                           \
  template CMatrix<R> to_special_unitary(const CMatrix<R>&);                                                 \
  template CMatrix<R> pauli_x<R>(const PrecisionPolicy&);                                                    \
  template CMatrix<R> pauli_y<R>(const PrecisionPolicy&);                                                    \
  template CMatrix<R> pauli_z<R>(const PrecisionPolicy&);

CHSE_INSTANTIATE_LINALG(double)
CHSE_INSTANTIATE_LINALG(BigFloat)

}  // namespace chse

#include "chse/haar/haar.hpp"

#include <algorithm>
#include <numeric>

#include "chse/parallel.hpp"

namespace chse::haar {

std::size_t replica_dimension(std::size_t d, int k, std::size_t max_side) {
  if (d < 1) throw InvalidArgument("local dimension must be >= 1");
  if (k < 1) throw InvalidArgument("replica count k must be >= 1");
  std::size_t side = 1;
  for (int i = 0; i < k; ++i) {
    if (side > max_side / d) {
      throw ResourceLimit("replica space d^k = " + std::to_string(d) + "^" + std::to_string(k) +
                          " exceeds the limit of " + std::to_string(max_side));
    }
    side *= d;
  }
  return side;
}

namespace {

std::vector<std::size_t> digits_of(std::size_t index, std::size_t d, int k) {
  std::vector<std::size_t> digits(k);
  for (int r = k - 1; r >= 0; --r) {
    digits[r] = index % d;
    index /= d;
  }
  return digits;
}

std::size_t index_of(const std::vector<std::size_t>& digits, std::size_t d) {
  std::size_t index = 0;
  for (auto g : digits) index = index * d + g;
  return index;
}

}  // namespace

template <RealScalar R>
CMatrix<R> replica_permutation(std::size_t d, const std::vector<int>& perm, const PrecisionPolicy& policy) {
  const int k = static_cast<int>(perm.size());
  const std::size_t side = replica_dimension(d, k);
  std::vector<int> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < k; ++i)
    if (sorted[i] != i) throw InvalidArgument("replica_permutation: not a permutation");
  PolicyScope scope(policy);
  CMatrix<R> p(side, side, policy);
  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < side; ++i) {
    const auto digits = digits_of(i, d, k);
    for (int r = 0; r < k; ++r) out[r] = digits[perm[r]];
    p(index_of(out, d), i) = Complex<R>(R(1.0));
  }
  return p;
}

template <RealScalar R>
MomentState<R> haar_moment_state(std::size_t d, int k, const PrecisionPolicy& policy) {
  if (d < 2) throw InvalidArgument("haar_moment_state needs d >= 2");
  if (k > 5) throw ResourceLimit("haar_moment_state supports k <= 5");
  const std::size_t side = replica_dimension(d, k);
  // Integer multiplicities first; entries are counts over d(d+1)...(d+k-1).
  std::vector<unsigned> count(side * side, 0);
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < side; ++i) {
    const auto digits = digits_of(i, d, k);
    std::sort(perm.begin(), perm.end());
    do {
      for (int r = 0; r < k; ++r) out[r] = digits[perm[r]];
      ++count[index_of(out, d) * side + i];
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  double norm = 1.0;
  for (int r = 0; r < k; ++r) norm *= static_cast<double>(d + r);
  PolicyScope scope(policy);
  const R denom(norm);
  MomentState<R> st{d, k, CMatrix<R>(side, side, policy)};
  for (std::size_t i = 0; i < side; ++i)
    for (std::size_t j = 0; j < side; ++j)
      if (count[i * side + j]) st.matrix(i, j) = Complex<R>(R(static_cast<double>(count[i * side + j])) / denom);
  return st;
}

template <RealScalar R>
MomentState<R> pure_moment(const CMatrix<R>& psi, int k) {
  if (psi.cols() != 1) throw DimensionError("pure_moment: expected a column vector");
  const CMatrix<R> rep = tensor_power(psi, k);
  return {psi.rows(), k, outer(rep, rep)};
}

template <RealScalar R>
R trace_distance(const CMatrix<R>& a, const CMatrix<R>& b, const R& tol) {
  PolicyScope scope(a.policy());
  const CMatrix<R> diff = a - b;
  const R allowance = tol < R(0.0) ? hermitian_tolerance(diff) : tol;
  return trace_norm_hermitian(diff, allowance) / R(2.0);
}

namespace {

template <RealScalar R>
CMatrix<R> gaussian_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng, const PrecisionPolicy& policy) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix<R> g(rows, cols, policy);
  PolicyScope scope(policy);
  for (auto& z : g.data()) {
    const double re = normal(rng);
    const double im = normal(rng);
    z = Complex<R>(R(re), R(im));
  }
  return g;
}

}  // namespace

template <RealScalar R>
CMatrix<R> sample_haar_unitary(std::size_t d, std::mt19937_64& rng, const PrecisionPolicy& policy) {
  if (d < 2) throw InvalidArgument("sample_haar_unitary needs d >= 2");
  CMatrix<R> q = gaussian_matrix<R>(d, d, rng, policy);
  PolicyScope scope(policy);
  // Modified Gram-Schmidt, twice per column for stability; the diagonal of the
  // implied triangular factor comes out real and positive.
  for (std::size_t j = 0; j < d; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < j; ++i) {
        Complex<R> proj;
        for (std::size_t r = 0; r < d; ++r) proj += conj(q(r, i)) * q(r, j);
        for (std::size_t r = 0; r < d; ++r) q(r, j) -= proj * q(r, i);
      }
    }
    R nrm(0.0);
    for (std::size_t r = 0; r < d; ++r) nrm += norm(q(r, j));
    nrm = sqrt(nrm);
    for (std::size_t r = 0; r < d; ++r) q(r, j) = q(r, j) / nrm;
  }
  return to_special_unitary(q);
}

template <RealScalar R>
CMatrix<R> sample_haar_unitary(std::size_t d, std::uint64_t seed, const PrecisionPolicy& policy) {
  std::mt19937_64 rng(seed);
  return sample_haar_unitary<R>(d, rng, policy);
}

CMatrix<double> random_state(std::size_t d, std::mt19937_64& rng) {
  if (d < 1) throw InvalidArgument("random_state needs d >= 1");
  CMatrix<double> v = gaussian_matrix<double>(d, 1, rng, PrecisionPolicy::hardware_double());
  double nrm = 0.0;
  for (const auto& z : v.data()) nrm += norm(z);
  v *= 1.0 / std::sqrt(nrm);
  return v;
}

MomentState<double> mc_haar_moment(std::size_t d, int k, std::size_t n_samples, std::uint64_t seed, unsigned threads) {
  if (n_samples < 1) throw InvalidArgument("mc_haar_moment needs at least one sample");
  const std::size_t side = replica_dimension(d, k);
  const auto policy = PrecisionPolicy::hardware_double();
  constexpr std::size_t kChunk = 1024;
  const std::size_t n_chunks = (n_samples + kChunk - 1) / kChunk;
  std::vector<CMatrix<double>> partial(n_chunks);
  parallel_for(n_chunks, threads, [&](std::size_t c) {
    std::mt19937_64 rng(mix_seed(seed, c));
    CMatrix<double> acc(side, side, policy);
    const std::size_t begin = c * kChunk;
    const std::size_t end = std::min(n_samples, begin + kChunk);
    CMatrix<double> col(d, 1, policy);
    for (std::size_t s = begin; s < end; ++s) {
      const auto u = sample_haar_unitary<double>(d, rng, policy);
      for (std::size_t r = 0; r < d; ++r) col(r, 0) = u(r, 0);
      const auto rep = tensor_power(col, k);
      // acc += |rep⟩⟨rep|, without a temporary matrix.
      for (std::size_t i = 0; i < side; ++i)
        for (std::size_t j = 0; j < side; ++j) acc(i, j) += rep(i, 0) * conj(rep(j, 0));
    }
    partial[c] = std::move(acc);
  });
  CMatrix<double> total(side, side, policy);
  for (const auto& p : partial) total += p;
  total *= 1.0 / static_cast<double>(n_samples);
  return {d, k, std::move(total)};
}

#define CHSE_INSTANTIATE_HAAR(R)                                                                            \
  template CMatrix<R> replica_permutation<R>(std::size_t, const std::vector<int>&, const PrecisionPolicy&); \
  template MomentState<R> haar_moment_state<R>(std::size_t, int, const PrecisionPolicy&);                   \
  template MomentState<R> pure_moment<R>(const CMatrix<R>&, int);                                           \
  template R trace_distance<R>(const CMatrix<R>&, const CMatrix<R>&, const R&);                             \
  template CMatrix<R> sample_haar_unitary<R>(std::size_t, std::mt19937_64&, const PrecisionPolicy&);        \
  template CMatrix<R> sample_haar_unitary<R>(std::size_t, std::uint64_t, const PrecisionPolicy&);

CHSE_INSTANTIATE_HAAR(double)
CHSE_INSTANTIATE_HAAR(BigFloat)

}  // namespace chse::haar

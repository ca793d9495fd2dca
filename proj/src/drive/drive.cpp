#include "chse/drive/drive.hpp"

#include <cmath>
#include <random>

namespace chse::drive {

namespace {

template <RealScalar R>
void require_unitary(const CMatrix<R>& a, const char* name) {
  if (!a.is_square()) throw DimensionError(std::string(name) + " is not square");
  PolicyScope scope(a.policy());
  const R err = unitarity_error(a);
  const R allowed = R(1000.0) * RealTraits<R>::ulp(a.policy()) * R(static_cast<double>(a.rows()));
  if (err > allowed) {
    throw InvalidArgument(std::string(name) + " is not unitary: ‖1 − AA†‖ = " + RealTraits<R>::to_decimal(err));
  }
}

template <RealScalar R>
CMatrix<R> matrix_power(const CMatrix<R>& a, unsigned e) {
  CMatrix<R> result = CMatrix<R>::identity(a.rows(), a.policy());
  CMatrix<R> base = a;
  bool first = true;
  while (e) {
    if (e & 1u) {
      result = first ? base : result * base;
      first = false;
    }
    e >>= 1u;
    if (e) base = base * base;
  }
  return result;
}

}  // namespace

template <RealScalar R>
DriveSpec<R> make_spec(unsigned m, CMatrix<R> A0, CMatrix<R> A1, double theta0) {
  if (m == 0) throw InvalidArgument("word order m must be >= 1");
  require_same_policy(A0.policy(), A1.policy(), "drive gates");
  if (A0.rows() != A1.rows()) throw DimensionError("drive gates have different dimensions");
  require_unitary(A0, "A0");
  require_unitary(A1, "A1");
  if (!(theta0 >= 0.0 && theta0 < 1.0)) throw InvalidArgument("rotation phase must lie in [0, 1) turns");
  DriveSpec<R> spec;
  spec.m = m;
  spec.d = A0.rows();
  spec.policy = A0.policy();
  spec.A0 = std::move(A0);
  spec.A1 = std::move(A1);
  spec.theta0 = theta0;
  return spec;
}

words::Symbols drive_symbols(unsigned m, double theta0, std::size_t t) {
  if (t == 0) return {};
  if (theta0 == 0.0) return words::fib_word_concat(m, t).symbols;
  return words::code_rotation(m, theta0, t).symbols;
}

template <RealScalar R>
CMatrix<R> u_sequence(const CMatrix<R>& A0, const CMatrix<R>& A1, const words::Symbols& symbols, std::size_t t) {
  if (symbols.size() < t) throw InvalidArgument("symbol sequence shorter than the requested time");
  CMatrix<R> u = CMatrix<R>::identity(A0.rows(), A0.policy());
  for (std::size_t i = 0; i < t; ++i) u = (symbols[i] ? A1 : A0) * u;
  return u;
}

template <RealScalar R>
CMatrix<R> u_direct(const DriveSpec<R>& spec, std::size_t t) {
  return u_sequence(spec.A0, spec.A1, drive_symbols(spec.m, spec.theta0, t), t);
}

template <RealScalar R>
std::vector<CMatrix<R>> u_gen_fib_all(const DriveSpec<R>& spec, unsigned n) {
  if (spec.theta0 != 0.0) throw InvalidArgument("the U(S_n) recursion needs the unshifted word (theta0 = 0)");
  std::vector<CMatrix<R>> v;
  v.reserve(n + 1);
  v.push_back(spec.A1);
  v.push_back(spec.A0);
  for (unsigned j = 1; j < n; ++j) v.push_back(v[j - 1] * matrix_power(v[j], spec.m));
  v.resize(std::max(n + 1, 2u));
  return v;
}

template <RealScalar R>
CMatrix<R> u_gen_fib(const DriveSpec<R>& spec, unsigned n) {
  if (n < 1) throw InvalidArgument("u_gen_fib needs n >= 1");
  return u_gen_fib_all(spec, n)[n];
}

template <RealScalar R>
CMatrix<R> u_zeckendorf(const DriveSpec<R>& spec, const mpz_class& T) {
  if (spec.m != 1) throw InvalidArgument("Zeckendorf splitting needs m = 1");
  const auto idx = words::zeckendorf(T);
  // F_c = U(S_{c-1}) = V_{c-1}.
  const auto v = u_gen_fib_all(spec, idx.front() - 1);
  CMatrix<R> u = v[idx.front() - 1];
  for (std::size_t i = 1; i < idx.size(); ++i) u = v[idx[i] - 1] * u;
  return u;
}

template <RealScalar R>
CMatrix<R> unitary_channel(const CMatrix<R>& U, int k) {
  const CMatrix<R> uk = tensor_power(U, k);
  return kron(uk.conjugate(), uk);
}

template <RealScalar R>
AvgChannelMat<R> avg_channel_sequence(const CMatrix<R>& A0, const CMatrix<R>& A1, const words::Symbols& symbols, int k,
                                      std::size_t T) {
  if (T < 1) throw InvalidArgument("averaging window T must be >= 1");
  if (symbols.size() + 1 < T) throw InvalidArgument("symbol sequence shorter than the averaging window");
  PolicyScope scope(A0.policy());
  CMatrix<R> u = CMatrix<R>::identity(A0.rows(), A0.policy());
  CMatrix<R> sum = unitary_channel(u, k);
  for (std::size_t t = 1; t < T; ++t) {
    u = (symbols[t - 1] ? A1 : A0) * u;
    sum += unitary_channel(u, k);
  }
  sum *= R(1.0) / R(static_cast<double>(T));
  return {k, A0.rows(), mpz_class(static_cast<unsigned long>(T)), std::move(sum)};
}

template <RealScalar R>
AvgChannelMat<R> avg_channel_direct(const DriveSpec<R>& spec, int k, std::size_t T) {
  return avg_channel_sequence(spec.A0, spec.A1, drive_symbols(spec.m, spec.theta0, T), k, T);
}

template <RealScalar R>
AvgChannelMat<R> avg_channel_recursive(const DriveSpec<R>& spec, int k, unsigned n, ErrorLedger* ledger,
                                       const ChannelObserver<R>& observer) {
  if (n < 1) throw InvalidArgument("avg_channel_recursive needs n >= 1");
  if (spec.theta0 != 0.0) throw InvalidArgument("the channel recursion needs the unshifted word (theta0 = 0)");
  PolicyScope scope(spec.policy);
  const auto S = words::gen_fib_numbers(spec.m, n);
  const std::size_t side = haar::replica_dimension(spec.d, 2 * k);
  const CMatrix<R> id = CMatrix<R>::identity(side, spec.policy);

  auto record = [&](unsigned j, const CMatrix<R>& v) {
    const R eps = unitarity_error(v);
    if (ledger) {
      LedgerEntry e;
      e.n = j;
      e.epsilon = RealTraits<R>::to_decimal(eps);
      e.log10_epsilon = log10_abs(eps);
      e.bits = spec.policy.is_big() ? spec.policy.bits : 53;
      ledger->entries.push_back(std::move(e));
    }
    return eps;
  };

  CMatrix<R> v_prev = spec.A1;  // V_0
  CMatrix<R> v_cur = spec.A0;   // V_1
  CMatrix<R> n_prev = id;       // N_{S_0}
  CMatrix<R> n_cur = id;        // N_{S_1}
  {
    const R eps = record(1, v_cur);
    if (observer) observer(1, S[1], n_cur, eps);
  }
  for (unsigned j = 1; j < n; ++j) {
    // Powers V_j^y for y = 0..m and their channel matrices.
    CMatrix<R> vy = CMatrix<R>::identity(spec.d, spec.policy);
    CMatrix<R> partial = id;  // Σ_{y<m} M^y, starting with y = 0
    for (unsigned y = 1; y < spec.m; ++y) {
      vy = v_cur * vy;
      partial += unitary_channel(vy, k);
    }
    vy = v_cur * vy;  // V_j^m
    const CMatrix<R> mm = unitary_channel(vy, k);
    const R a = mpz_ratio<R>(S[j], S[j + 1]);
    const R b = mpz_ratio<R>(S[j - 1], S[j + 1]);
    CMatrix<R> first = spec.m == 1 ? n_cur : n_cur * partial;
    first *= a;
    CMatrix<R> second = n_prev * mm;
    second *= b;
    n_prev = std::move(n_cur);
    n_cur = first + second;

    CMatrix<R> v_next = v_prev * vy;
    v_prev = std::move(v_cur);
    v_cur = std::move(v_next);
    const R eps = record(j + 1, v_cur);
    if (observer) observer(j + 1, S[j + 1], n_cur, eps);
  }
  return {k, spec.d, S[n], std::move(n_cur)};
}

template <RealScalar R>
CMatrix<R> make_state(const std::vector<std::complex<double>>& amplitudes, const PrecisionPolicy& policy) {
  if (amplitudes.empty()) throw InvalidArgument("empty state vector");
  CMatrix<R> psi = CMatrix<R>::from_values(amplitudes.size(), 1, amplitudes, policy);
  PolicyScope scope(policy);
  R nrm(0.0);
  for (const auto& z : psi.data()) nrm += norm(z);
  if (nrm == R(0.0)) throw InvalidArgument("zero state vector");
  psi *= R(1.0) / sqrt(nrm);
  return psi;
}

template <RealScalar R>
haar::MomentState<R> apply_channel(const CMatrix<R>& N, std::size_t d, int k, const CMatrix<R>& psi0) {
  if (psi0.cols() != 1 || psi0.rows() != d) throw DimensionError("initial state has the wrong dimension");
  PolicyScope scope(N.policy());
  R nrm(0.0);
  for (const auto& z : psi0.data()) nrm += norm(z);
  if (abs(nrm - R(1.0)) > R(1e-12)) {
    throw InvalidArgument("initial state is not normalised (‖ψ‖² = " + RealTraits<R>::to_decimal(nrm) + ")");
  }
  CMatrix<R> psi = psi0;
  psi *= R(1.0) / sqrt(nrm);
  const auto rho0 = haar::pure_moment(psi, k);
  const std::size_t side = rho0.matrix.rows();
  if (N.rows() != side * side) throw DimensionError("channel and state replica spaces differ");
  return {d, k, unvec(N * vec(rho0.matrix), side)};
}

template <RealScalar R>
haar::MomentState<R> temporal_moment(const AvgChannelMat<R>& channel, const CMatrix<R>& psi0) {
  return apply_channel(channel.matrix, channel.d, channel.k, psi0);
}

template <RealScalar R>
R delta_k(const haar::MomentState<R>& rho, const haar::MomentState<R>& haar_state, const R& tol) {
  if (rho.d != haar_state.d || rho.k != haar_state.k) throw DimensionError("delta_k: (d, k) mismatch");
  return haar::trace_distance(rho.matrix, haar_state.matrix, tol);
}

words::Symbols coin_sequence(double p1, std::size_t T, std::uint64_t seed) {
  if (!(p1 > 0.0 && p1 < 1.0)) {
    throw InvalidArgument("coin bias must lie strictly between 0 and 1 (both symbols need support)");
  }
  std::mt19937_64 rng(seed);
  words::Symbols s(T);
  for (auto& x : s) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    x = u < p1 ? 1 : 0;
  }
  return s;
}

#define CHSE_INSTANTIATE_DRIVE(R)                                                                               \
  template DriveSpec<R> make_spec<R>(unsigned, CMatrix<R>, CMatrix<R>, double);                                \
  template CMatrix<R> u_sequence<R>(const CMatrix<R>&, const CMatrix<R>&, const words::Symbols&, std::size_t); \
  template CMatrix<R> u_direct<R>(const DriveSpec<R>&, std::size_t);                                           \
  template std::vector<CMatrix<R>> u_gen_fib_all<R>(const DriveSpec<R>&, unsigned);                            \
  template CMatrix<R> u_gen_fib<R>(const DriveSpec<R>&, unsigned);                                             \
  template CMatrix<R> u_zeckendorf<R>(const DriveSpec<R>&, const mpz_class&);                                  \
  template CMatrix<R> unitary_channel<R>(const CMatrix<R>&, int);                                              \
  template AvgChannelMat<R> avg_channel_sequence<R>(const CMatrix<R>&, const CMatrix<R>&, const words::Symbols&, \
                                                    int, std::size_t);                                         \
  template AvgChannelMat<R> avg_channel_direct<R>(const DriveSpec<R>&, int, std::size_t);                      \
  template AvgChannelMat<R> avg_channel_recursive<R>(const DriveSpec<R>&, int, unsigned, ErrorLedger*,          \
                                                     const ChannelObserver<R>&);                               \
  template CMatrix<R> make_state<R>(const std::vector<std::complex<double>>&, const PrecisionPolicy&);          \
  template haar::MomentState<R> apply_channel<R>(const CMatrix<R>&, std::size_t, int, const CMatrix<R>&);      \
  template haar::MomentState<R> temporal_moment<R>(const AvgChannelMat<R>&, const CMatrix<R>&);                \
  template R delta_k<R>(const haar::MomentState<R>&, const haar::MomentState<R>&, const R&);

CHSE_INSTANTIATE_DRIVE(double)
CHSE_INSTANTIATE_DRIVE(BigFloat)

}  // namespace chse::drive

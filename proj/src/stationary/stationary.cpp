#include "chse/stationary/stationary.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace chse::stationary {

template <RealScalar R>
HamiltonianSpec<R> make_hamiltonian(const CMatrix<R>& H, const CMatrix<R>& psi) {
  if (!H.is_square()) throw DimensionError("Hamiltonian is not square");
  if (psi.cols() != 1 || psi.rows() != H.rows()) throw DimensionError("state and Hamiltonian dimensions differ");
  PolicyScope scope(H.policy());
  auto es = eig_hermitian(H, true);
  HamiltonianSpec<R> ham{H, std::move(es.values), std::move(es.vectors), {}};
  R total(0.0);
  for (std::size_t a = 0; a < H.rows(); ++a) {
    Complex<R> c;
    for (std::size_t i = 0; i < H.rows(); ++i) c += conj(ham.basis(i, a)) * psi(i, 0);
    total += norm(c);
    ham.overlaps.push_back(c);
  }
  if (abs(total - R(1.0)) > R(1e-10)) throw InvalidArgument("initial state is not normalised");
  return ham;
}

template <RealScalar R>
R bound_B(std::size_t d) {
  if (d < 2) throw InvalidArgument("bound_B needs d >= 2");
  const R dd(static_cast<double>(d));
  return R(1.0) / (dd + R(1.0)) - sqrt(R(1.0) / (R(2.0) * dd * (dd + R(1.0))));
}

template <RealScalar R>
CMatrix<R> rho_inf_2_eigenbasis(const HamiltonianSpec<R>& ham) {
  const std::size_t d = ham.energies.size();
  PolicyScope scope(ham.H.policy());
  R scale(0.0);
  for (const auto& e : ham.energies)
    if (abs(e) > scale) scale = abs(e);
  const R tol = R(1e-10) * scale;
  CMatrix<R> rho(d * d, d * d, ham.H.policy());
  const auto& c = ham.overlaps;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      const R e_ab = ham.energies[a] + ham.energies[b];
      const Complex<R> cab = c[a] * c[b];
      for (std::size_t a2 = 0; a2 < d; ++a2)
        for (std::size_t b2 = 0; b2 < d; ++b2) {
          if (abs(e_ab - ham.energies[a2] - ham.energies[b2]) > tol) continue;
          rho(a * d + b, a2 * d + b2) = cab * conj(c[a2] * c[b2]);
        }
    }
  return rho;
}

template <RealScalar R>
haar::MomentState<R> rho_inf_2(const HamiltonianSpec<R>& ham) {
  const std::size_t d = ham.energies.size();
  PolicyScope scope(ham.H.policy());
  const CMatrix<R> vv = kron(ham.basis, ham.basis);
  return {d, 2, vv * rho_inf_2_eigenbasis(ham) * vv.adjoint()};
}

template <RealScalar R>
CMatrix<R> dephase2(const CMatrix<R>& rho, std::size_t d) {
  if (rho.rows() != d * d || !rho.is_square()) throw DimensionError("dephase2 expects a d² x d² matrix");
  PolicyScope scope(rho.policy());
  CMatrix<R> out(d * d, d * d, rho.policy());
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      const std::size_t ab = a * d + b;
      out(ab, ab) = rho(ab, ab);
      if (a != b) out(ab, b * d + a) = rho(ab, ab);
    }
  return out;
}

template <RealScalar R>
StationaryCertificate<R> delta2_time_independent(const HamiltonianSpec<R>& ham, double tol) {
  const std::size_t d = ham.energies.size();
  const auto policy = ham.H.policy();
  PolicyScope scope(policy);
  const auto haar_state = haar::haar_moment_state<R>(d, 2, policy);
  // ρ_Haar is the same in every basis, so compare in the eigenbasis.
  const CMatrix<R> rho = rho_inf_2_eigenbasis(ham);
  StationaryCertificate<R> cert;
  cert.delta = haar::trace_distance(haar_state.matrix, rho, R(1e-10));
  const CMatrix<R> dh = dephase2(haar_state.matrix, d);
  const CMatrix<R> dr = dephase2(rho, d);
  cert.dephased = haar::trace_distance(dh, dr, R(1e-10));

  const R dd(static_cast<double>(d));
  const R denom = dd * (dd + R(1.0));
  R sum(0.0), diag(0.0);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      const R p = norm(ham.overlaps[a]) * norm(ham.overlaps[b]);
      const R target = (a == b ? R(2.0) : R(1.0)) / denom;
      sum += abs(p - target);
      if (a == b) diag += abs(p - target);
    }
  cert.dephased_sum = sum / R(2.0);
  cert.diagonal_bound = diag / R(2.0);
  cert.bound = bound_B<R>(d);
  const R slack(tol);
  cert.chain_holds = !(cert.delta < cert.dephased - slack) && !(abs(cert.dephased - cert.dephased_sum) > R(1e-9)) &&
                     !(cert.dephased_sum < cert.diagonal_bound - slack) && !(cert.diagonal_bound < cert.bound - slack);
  return cert;
}

CMatrix<double> random_hermitian(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix<double> h(d, d, PrecisionPolicy::hardware_double());
  for (std::size_t i = 0; i < d; ++i) {
    h(i, i) = Complex<double>(normal(rng));
    for (std::size_t j = i + 1; j < d; ++j) {
      const double re = normal(rng) / std::sqrt(2.0);
      const double im = normal(rng) / std::sqrt(2.0);
      h(i, j) = Complex<double>(re, im);
      h(j, i) = Complex<double>(re, -im);
    }
  }
  return h;
}

double lemma_F(const std::vector<double>& a, double xi) {
  double total = 0.0;
  for (double x : a) {
    if (x < -1e-12) throw InvalidArgument("lemma_F: negative weight");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("lemma_F: weights do not sum to 1");
  double f = 0.0;
  for (double x : a) f += std::abs(x * x - xi * xi);
  return f;
}

double brute_min_F(std::size_t d, double xi, double step) {
  if (d < 1) throw InvalidArgument("brute_min_F needs d >= 1");
  if (!(step > 0.0 && step <= 0.01)) throw InvalidArgument("brute_min_F needs 0 < step <= 0.01");
  const long n = std::lround(1.0 / step);
  if (std::abs(static_cast<double>(n) * step - 1.0) > 1e-9) throw InvalidArgument("1/step must be an integer");
  const double xi2 = xi * xi;
  const double inv = 1.0 / static_cast<double>(n);
  double best = std::numeric_limits<double>::infinity();
  // parts[i] non-increasing, Σ parts = n.
  std::function<void(std::size_t, long, long, double)> walk = [&](std::size_t i, long remaining, long cap, double acc) {
    if (acc >= best) return;
    if (i + 1 == d) {
      if (remaining > cap) return;
      const double x = remaining * inv;
      best = std::min(best, acc + std::abs(x * x - xi2));
      return;
    }
    const std::size_t left = d - i;
    // The largest remaining part is at least remaining/left.
    const long lo = (remaining + static_cast<long>(left) - 1) / static_cast<long>(left);
    for (long p = std::min(cap, remaining); p >= lo; --p) {
      const double x = p * inv;
      walk(i + 1, remaining - p, p, acc + std::abs(x * x - xi2));
    }
  };
  walk(0, n, n, 0.0);
  return best;
}

double lemma_family_F(std::size_t d, double xi) {
  const double M = std::floor(1.0 / xi);
  const double r = 1.0 - xi * M;
  return xi * xi * (static_cast<double>(d) - M) - r * r;
}

#define CHSE_INSTANTIATE_STATIONARY(R)                                                             \
  template HamiltonianSpec<R> make_hamiltonian<R>(const CMatrix<R>&, const CMatrix<R>&);          \
  template R bound_B<R>(std::size_t);                                                              \
  template CMatrix<R> rho_inf_2_eigenbasis<R>(const HamiltonianSpec<R>&);                         \
  template haar::MomentState<R> rho_inf_2<R>(const HamiltonianSpec<R>&);                          \
  template CMatrix<R> dephase2<R>(const CMatrix<R>&, std::size_t);                                 \
  template StationaryCertificate<R> delta2_time_independent<R>(const HamiltonianSpec<R>&, double);

CHSE_INSTANTIATE_STATIONARY(double)
CHSE_INSTANTIATE_STATIONARY(BigFloat)

}  // namespace chse::stationary

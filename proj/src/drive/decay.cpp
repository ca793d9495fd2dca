#include "chse/drive/decay.hpp"

#include <cmath>
#include <set>

namespace chse::drive {

namespace {

constexpr double kLn10 = 2.302585092994045684;

// Hermiticity allowance for computed moment states: rounding in a d^k-term
// product sum plus the ledger's drift.
template <RealScalar R>
R moment_tolerance(const CMatrix<R>& m, const R& eps) {
  const R ulp = RealTraits<R>::ulp(m.policy());
  return R(1000.0) * ulp * R(static_cast<double>(m.rows())) + R(100.0) * eps;
}

template <RealScalar R>
void fill_point(DecayPoint& p, const std::vector<R>& deltas, const R& eps, unsigned bits) {
  R mean(0.0);
  for (const auto& d : deltas) {
    mean += d;
    p.state_delta.push_back(RealTraits<R>::to_decimal(d));
    p.state_log_delta.push_back(log10_abs(d) * kLn10);
  }
  mean /= R(static_cast<double>(deltas.size()));
  p.delta = RealTraits<R>::to_decimal(mean);
  p.log_delta = log10_abs(mean) * kLn10;
  p.epsilon = RealTraits<R>::to_decimal(eps);
  p.log10_epsilon = log10_abs(eps);
  p.bits = bits;
}

}  // namespace

template <RealScalar R>
DecaySeries decay_series(const DriveSpec<R>& spec, int k, const std::vector<CMatrix<R>>& psi0s, unsigned n_max,
                         double ledger_ratio) {
  if (psi0s.empty()) throw InvalidArgument("decay_series needs at least one initial state");
  if (n_max < 1) throw InvalidArgument("decay_series needs n_max >= 1");
  PolicyScope scope(spec.policy);
  const auto haar_state = haar::haar_moment_state<R>(spec.d, k, spec.policy);
  const unsigned bits = spec.policy.is_big() ? spec.policy.bits : 53;
  const R ratio(ledger_ratio);
  DecaySeries series;
  series.bits = bits;
  auto observer = [&](unsigned j, const mpz_class& S_j, const CMatrix<R>& N, const R& eps) {
    std::vector<R> deltas;
    deltas.reserve(psi0s.size());
    R smallest(0.0);
    for (const auto& psi : psi0s) {
      const auto rho = apply_channel(N, spec.d, k, psi);
      deltas.push_back(delta_k(rho, haar_state, moment_tolerance(rho.matrix, eps)));
      if (deltas.size() == 1 || deltas.back() < smallest) smallest = deltas.back();
    }
    if (eps > ratio * smallest) {
      throw LedgerViolation("ε_" + std::to_string(j) + " = " + RealTraits<R>::to_decimal(eps, 6) + " exceeds " +
                                std::to_string(ledger_ratio) + "·Δ = " + RealTraits<R>::to_decimal(ratio * smallest, 6) +
                                " at " + std::to_string(bits) + " bits",
                            static_cast<int>(j));
    }
    DecayPoint p;
    p.n = j;
    p.time = S_j;
    p.log_time = log_mpz(S_j);
    fill_point(p, deltas, eps, bits);
    series.points.push_back(std::move(p));
  };
  avg_channel_recursive(spec, k, n_max, &series.ledger, ChannelObserver<R>(observer));
  return series;
}

DecaySeries decay_series_ladder(const std::function<DriveSpec<double>()>& make_double,
                                const std::function<DriveSpec<BigFloat>(const PrecisionPolicy&)>& make_big, int k,
                                const std::vector<std::vector<std::complex<double>>>& states, unsigned n_max,
                                const LadderOptions& opts) {
  if (opts.max_bits <= 53) {
    const auto spec = make_double();
    std::vector<CMatrix<double>> psi;
    for (const auto& s : states) psi.push_back(make_state<double>(s, spec.policy));
    return decay_series(spec, k, psi, n_max, opts.ledger_ratio);
  }
  unsigned bits = std::max(64u, opts.start_bits);
  int restarts = 0;
  for (;;) {
    const auto policy = PrecisionPolicy::big_float(bits);
    const auto spec = make_big(policy);
    std::vector<CMatrix<BigFloat>> psi;
    for (const auto& s : states) psi.push_back(make_state<BigFloat>(s, policy));
    try {
      auto series = decay_series(spec, k, psi, n_max, opts.ledger_ratio);
      series.restarts = restarts;
      return series;
    } catch (const LedgerViolation&) {
      // The recursion contaminates every later step, so restart from scratch.
      if (bits * 2 > opts.max_bits) throw;
      bits *= 2;
      ++restarts;
    }
  }
}

template <RealScalar R>
std::vector<DecayPoint> sequence_decay(const CMatrix<R>& A0, const CMatrix<R>& A1, const words::Symbols& symbols, int k,
                                       const std::vector<CMatrix<R>>& psi0s, const std::vector<std::size_t>& times) {
  if (psi0s.empty()) throw InvalidArgument("sequence_decay needs at least one initial state");
  if (times.empty()) return {};
  for (std::size_t i = 1; i < times.size(); ++i)
    if (times[i] <= times[i - 1]) throw InvalidArgument("sequence_decay: times must be strictly increasing");
  if (times.front() < 1) throw InvalidArgument("sequence_decay: times start at 1");
  if (symbols.size() + 1 < times.back()) throw InvalidArgument("symbol sequence shorter than the last time");
  const auto policy = A0.policy();
  PolicyScope scope(policy);
  const std::size_t d = A0.rows();
  const auto haar_state = haar::haar_moment_state<R>(d, k, policy);
  const unsigned bits = policy.is_big() ? policy.bits : 53;

  std::vector<CMatrix<R>> psi;
  std::vector<CMatrix<R>> acc;
  for (const auto& p : psi0s) {
    psi.push_back(p);
    acc.emplace_back(haar_state.matrix.rows(), haar_state.matrix.rows(), policy);
  }
  CMatrix<R> u = CMatrix<R>::identity(d, policy);
  std::vector<DecayPoint> out;
  std::size_t next = 0;
  for (std::size_t t = 0; t < times.back(); ++t) {
    if (t > 0) {
      const auto& gate = symbols[t - 1] ? A1 : A0;
      u = gate * u;
      for (auto& p : psi) p = gate * p;
    }
    for (std::size_t s = 0; s < psi.size(); ++s) acc[s] += haar::pure_moment(psi[s], k).matrix;
    if (t + 1 == times[next]) {
      const R eps = unitarity_error(u);
      std::vector<R> deltas;
      for (const auto& a : acc) {
        CMatrix<R> rho = a;
        rho *= R(1.0) / R(static_cast<double>(t + 1));
        deltas.push_back(haar::trace_distance(rho, haar_state.matrix, moment_tolerance(rho, eps)));
      }
      DecayPoint p;
      p.time = static_cast<unsigned long>(t + 1);
      p.log_time = std::log(static_cast<double>(t + 1));
      fill_point(p, deltas, eps, bits);
      out.push_back(std::move(p));
      ++next;
    }
  }
  return out;
}

std::vector<std::size_t> log_spaced_times(std::size_t t_min, std::size_t t_max, int per_decade) {
  if (t_min < 1 || t_max < t_min || per_decade < 1) throw InvalidArgument("log_spaced_times: bad range");
  std::set<std::size_t> out;
  const double lo = std::log10(static_cast<double>(t_min));
  const double hi = std::log10(static_cast<double>(t_max));
  const int steps = static_cast<int>(std::ceil((hi - lo) * per_decade));
  for (int i = 0; i <= steps; ++i) {
    const double x = steps == 0 ? lo : lo + (hi - lo) * i / steps;
    out.insert(std::min(t_max, std::max(t_min, static_cast<std::size_t>(std::llround(std::pow(10.0, x))))));
  }
  return {out.begin(), out.end()};
}

template DecaySeries decay_series<double>(const DriveSpec<double>&, int, const std::vector<CMatrix<double>>&, unsigned,
                                          double);
template DecaySeries decay_series<BigFloat>(const DriveSpec<BigFloat>&, int, const std::vector<CMatrix<BigFloat>>&,
                                            unsigned, double);
template std::vector<DecayPoint> sequence_decay<double>(const CMatrix<double>&, const CMatrix<double>&,
                                                        const words::Symbols&, int, const std::vector<CMatrix<double>>&,
                                                        const std::vector<std::size_t>&);
template std::vector<DecayPoint> sequence_decay<BigFloat>(const CMatrix<BigFloat>&, const CMatrix<BigFloat>&,
                                                          const words::Symbols&, int,
                                                          const std::vector<CMatrix<BigFloat>>&,
                                                          const std::vector<std::size_t>&);

}  // namespace chse::drive

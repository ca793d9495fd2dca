#include "chse/manybody/deep_therm.hpp"

#include <bit>
#include <cmath>

#include "chse/parallel.hpp"

namespace chse::manybody {

ProjectedEnsemble projected_ensemble(const State& psi, unsigned L, unsigned n_a, double cutoff) {
  if (L < 2 || L > 24) throw InvalidArgument("projected_ensemble: L out of range");
  if (n_a < 1 || n_a >= L) throw InvalidArgument("projected_ensemble needs 1 <= N_A < L");
  if (psi.size() != (std::size_t{1} << L)) throw DimensionError("state has the wrong dimension");
  ProjectedEnsemble ens;
  ens.d_a = std::size_t{1} << n_a;
  ens.d_b = std::size_t{1} << (L - n_a);
  for (std::size_t b = 0; b < ens.d_b; ++b) {
    double p = 0.0;
    for (std::size_t a = 0; a < ens.d_a; ++a) p += std::norm(psi[a * ens.d_b + b]);
    if (p < cutoff) {
      ens.leakage += p;
      continue;
    }
    const double inv = 1.0 / std::sqrt(p);
    State phi(ens.d_a);
    for (std::size_t a = 0; a < ens.d_a; ++a) phi[a] = psi[a * ens.d_b + b] * inv;
    ens.p.push_back(p);
    ens.states.push_back(std::move(phi));
    ens.outcomes.push_back(b);
  }
  return ens;
}

haar::MomentState<double> projected_moment(const ProjectedEnsemble& ens, int k) {
  if (k < 1) throw InvalidArgument("moment order k must be >= 1");
  if (ens.p.empty()) throw InvalidArgument("projected ensemble is empty");
  const std::size_t side = haar::replica_dimension(ens.d_a, k);
  const auto policy = PrecisionPolicy::hardware_double();
  CMatrix<double> rho(side, side, policy);
  double total = 0.0;
  std::vector<std::complex<double>> v;
  for (std::size_t i = 0; i < ens.p.size(); ++i) {
    v.assign(1, 1.0);
    for (int r = 0; r < k; ++r) {
      std::vector<std::complex<double>> next;
      next.reserve(v.size() * ens.d_a);
      for (const auto& x : v)
        for (const auto& y : ens.states[i]) next.push_back(x * y);
      v = std::move(next);
    }
    for (std::size_t r = 0; r < side; ++r)
      for (std::size_t c = 0; c < side; ++c) {
        const auto z = ens.p[i] * v[r] * std::conj(v[c]);
        rho(r, c) += Complex<double>(z.real(), z.imag());
      }
    total += ens.p[i];
  }
  rho *= 1.0 / total;
  return {ens.d_a, k, std::move(rho)};
}

double delta_E(const haar::MomentState<double>& moment) {
  const auto haar_state = haar::haar_moment_state<double>(moment.d, moment.k, moment.matrix.policy());
  return haar::trace_distance(moment.matrix, haar_state.matrix);
}

double haar_projected_reference(std::size_t d_a, std::size_t d_b, int k, std::size_t n_samples, std::uint64_t seed,
                                unsigned threads) {
  if (n_samples < 1) throw InvalidArgument("haar_projected_reference needs n_samples >= 1");
  if (d_a < 2 || d_b < 1 || (d_a & (d_a - 1)) || (d_b & (d_b - 1)))
    throw InvalidArgument("haar_projected_reference needs power-of-two d_A >= 2 and d_B >= 1");
  const auto n_a = static_cast<unsigned>(std::countr_zero(d_a));
  const auto L = n_a + static_cast<unsigned>(std::countr_zero(d_b));
  std::vector<double> values(n_samples);
  parallel_for(n_samples, threads, [&](std::size_t i) {
    std::mt19937_64 rng(mix_seed(seed, i));
    const auto v = haar::random_state(d_a * d_b, rng);
    State psi(d_a * d_b);
    for (std::size_t j = 0; j < psi.size(); ++j) psi[j] = {v(j, 0).re, v(j, 0).im};
    if (L == n_a) {
      // d_B = 1: one outcome, the whole state.
      ProjectedEnsemble ens{d_a, 1, {1.0}, {psi}, {0}, 0.0};
      values[i] = delta_E(projected_moment(ens, k));
      return;
    }
    values[i] = delta_E(projected_moment(projected_ensemble(psi, L, n_a), k));
  });
  double sum = 0.0;
  for (double x : values) sum += x;
  return sum / static_cast<double>(n_samples);
}

DeepThermResult deep_therm_series(const DeepThermOptions& opts) {
  if (opts.n_states < 1) throw InvalidArgument("deep-therm needs at least one initial state");
  if (opts.t_max < 4) throw InvalidArgument("deep-therm needs t_max >= 4");
  if (!(opts.plateau_from > 0.0 && opts.plateau_from < 1.0)) throw InvalidArgument("plateau_from must lie in (0, 1)");
  const ChainGates gates(opts.chain);
  const auto symbols = drive::drive_symbols(opts.chain.m, 0.0, opts.t_max);
  const auto states = product_initial_states(opts.chain.L, opts.n_states, opts.seed);
  const std::size_t n_t = opts.t_max + 1;
  std::vector<std::vector<double>> delta(states.size(), std::vector<double>(n_t));
  std::vector<std::vector<double>> leak(states.size(), std::vector<double>(n_t));
  parallel_for(states.size(), opts.threads, [&](std::size_t s) {
    State psi = states[s];
    for (std::size_t t = 0; t < n_t; ++t) {
      if (t > 0) gates.apply(symbols[t - 1], psi);
      const auto ens = projected_ensemble(psi, opts.chain.L, opts.n_a);
      delta[s][t] = delta_E(projected_moment(ens, opts.k));
      leak[s][t] = ens.leakage;
    }
  });

  DeepThermResult res;
  for (std::size_t t = 0; t < n_t; ++t) {
    DeepThermPoint p;
    p.t = t;
    for (std::size_t s = 0; s < states.size(); ++s) {
      p.delta_E += delta[s][t];
      p.leakage = std::max(p.leakage, leak[s][t]);
    }
    p.delta_E /= static_cast<double>(states.size());
    res.points.push_back(p);
  }
  const auto first_plateau = static_cast<std::size_t>(std::ceil(opts.plateau_from * static_cast<double>(opts.t_max)));
  for (std::size_t t = first_plateau; t < n_t; ++t) res.plateau += res.points[t].delta_E;
  res.plateau /= static_cast<double>(n_t - first_plateau);

  const std::size_t d_a = std::size_t{1} << opts.n_a;
  const std::size_t d_b = std::size_t{1} << (opts.chain.L - opts.n_a);
  res.reference = haar_projected_reference(d_a, d_b, opts.k, opts.ref_samples, mix_seed(opts.seed, 1u << 20), opts.threads);

  std::vector<double> x, y;
  for (const auto& p : res.points) {
    if (p.t < opts.fit_from) continue;
    if (p.delta_E <= opts.window_factor * res.plateau) break;
    x.push_back(static_cast<double>(p.t));
    y.push_back(p.delta_E);
  }
  try {
    res.fit = exp_fit(x, y);
    res.fit.first = opts.fit_from;
    res.fit.last = opts.fit_from + x.size();
    res.fit_ok = true;
  } catch (const InvalidArgument&) {
    res.fit_ok = false;
  }
  return res;
}

}  // namespace chse::manybody

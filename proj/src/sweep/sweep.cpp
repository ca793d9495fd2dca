#include "chse/sweep/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "chse/parallel.hpp"

namespace chse::sweep {

namespace {

// Returns the exact value of cos(πx) when 2x is an integer.
std::optional<double> exact_cos_pi(double x) {
  const double twice = 2.0 * x;
  if (twice != std::floor(twice) || !std::isfinite(twice)) return std::nullopt;
  const long q = static_cast<long>(std::fmod(twice, 4.0) + 4.0) % 4;  // x mod 2 in halves
  static constexpr double table[4] = {1.0, 0.0, -1.0, 0.0};
  return table[q];
}

}  // namespace

template <RealScalar R>
R cos_pi(double x) {
  if (auto v = exact_cos_pi(x)) return R(*v);
  return cos(R(x) * RealTraits<R>::pi());
}

template <RealScalar R>
R sin_pi(double x) {
  // sin(πx) = cos(π(x − 1/2)); x − 1/2 is exact for the inputs used here.
  if (auto v = exact_cos_pi(x - 0.5)) return R(*v);
  return sin(R(x) * RealTraits<R>::pi());
}

template <RealScalar R>
std::pair<CMatrix<R>, CMatrix<R>> qubit_gates(const QubitAngles& a, const PrecisionPolicy& policy) {
  for (double v : {a.theta1, a.theta2, a.theta3})
    if (!std::isfinite(v)) throw InvalidArgument("qubit angles must be finite");
  PolicyScope scope(policy);
  CMatrix<R> u0(2, 2, policy);
  const R c1 = cos_pi<R>(a.theta1);
  const R s1 = sin_pi<R>(a.theta1);
  u0(0, 0) = Complex<R>(c1, -s1);
  u0(1, 1) = Complex<R>(c1, s1);
  // exp(−iθ n·σ) = cos θ − i sin θ (n_z Z + n_x X)
  const R c2 = cos_pi<R>(a.theta2);
  const R s2 = sin_pi<R>(a.theta2);
  const R nz = cos_pi<R>(a.theta3);
  const R nx = sin_pi<R>(a.theta3);
  CMatrix<R> u1(2, 2, policy);
  u1(0, 0) = Complex<R>(c2, -(s2 * nz));
  u1(1, 1) = Complex<R>(c2, s2 * nz);
  u1(0, 1) = Complex<R>(R(0.0), -(s2 * nx));
  u1(1, 0) = Complex<R>(R(0.0), -(s2 * nx));
  return {std::move(u0), std::move(u1)};
}

template <RealScalar R>
drive::DriveSpec<R> qubit_drive(const QubitAngles& angles, const PrecisionPolicy& policy, unsigned m) {
  auto [a0, a1] = qubit_gates<R>(angles, policy);
  return drive::make_spec<R>(m, std::move(a0), std::move(a1));
}

FitResult linear_fit(const std::vector<double>& x, const std::vector<double>& y, std::size_t min_points) {
  if (x.size() != y.size()) throw InvalidArgument("fit: x and y differ in length");
  const std::size_t n = x.size();
  min_points = std::max<std::size_t>(min_points, 3);
  if (n < min_points)
    throw InvalidArgument("fit needs at least " + std::to_string(min_points) + " points, got " + std::to_string(n));
  for (double v : y)
    if (!std::isfinite(v)) throw InvalidArgument("fit: non-finite value (nonpositive Δ?)");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("fit: all abscissae equal");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (intercept + slope * x[i]);
    ssr += r * r;
  }
  FitResult fit;
  fit.gamma = -slope;
  fit.intercept = intercept;
  fit.residual = std::sqrt(ssr / static_cast<double>(n));
  fit.stderr_gamma = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
  fit.first = 0;
  fit.last = n;
  return fit;
}

std::pair<std::size_t, std::size_t> default_window(std::size_t size) { return {size / 5, size}; }

FitResult powerlaw_fit(const std::vector<drive::DecayPoint>& points, std::optional<std::pair<std::size_t, std::size_t>> window,
                       int state) {
  const auto [first, last] = window.value_or(default_window(points.size()));
  if (first >= last || last > points.size()) throw InvalidArgument("fit window out of range");
  std::vector<double> x, y;
  for (std::size_t i = first; i < last; ++i) {
    const auto& p = points[i];
    x.push_back(p.log_time);
    if (state < 0) {
      y.push_back(p.log_delta);
    } else {
      if (static_cast<std::size_t>(state) >= p.state_log_delta.size()) throw InvalidArgument("fit: no such state");
      y.push_back(p.state_log_delta[state]);
    }
  }
  FitResult fit = linear_fit(x, y);
  fit.first = first;
  fit.last = last;
  return fit;
}

std::optional<double> zeta(const FitResult& fit_n, const FitResult& fit_m) {
  if (fit_m.gamma == 0.0) return std::nullopt;
  return std::abs(fit_n.gamma - fit_m.gamma) / std::abs(fit_m.gamma);
}

std::vector<std::vector<std::complex<double>>> initial_states(unsigned n_states, std::uint64_t seed) {
  std::vector<std::vector<std::complex<double>>> out;
  for (unsigned s = 0; s < n_states; ++s) {
    std::mt19937_64 rng(mix_seed(seed, s));
    const auto v = haar::random_state(2, rng);
    out.push_back({{v(0, 0).re, v(0, 0).im}, {v(1, 0).re, v(1, 0).im}});
  }
  return out;
}

GammaPoint gamma_point(const QubitAngles& angles, const GammaMapOptions& opts,
                       const std::vector<std::vector<std::complex<double>>>& states) {
  GammaPoint pt;
  pt.angles = angles;
  pt.k = opts.k;
  try {
    const auto series = drive::decay_series_ladder(
        [&] { return qubit_drive<double>(angles, PrecisionPolicy::hardware_double()); },
        [&](const PrecisionPolicy& p) { return qubit_drive<BigFloat>(angles, p); }, opts.k, states, opts.n_max,
        opts.ladder);
    pt.bits = series.bits;
    pt.final_delta = series.points.back().delta;
    pt.fit = powerlaw_fit(series.points);
    const unsigned n_ref = opts.n_ref ? opts.n_ref : (opts.n_max * 4) / 5;
    if (n_ref >= 5 && n_ref < series.points.size()) {
      const auto ref = powerlaw_fit(series.points, default_window(n_ref));
      // ζ_n^m with the shorter run in the numerator position.
      pt.zeta = zeta(ref, pt.fit);
    }
    pt.converged = zeta_converged(pt.zeta);
    if (!pt.zeta) pt.flags.push_back("zeta_undefined");
    if (std::abs(pt.fit.gamma) <= 0.02) pt.flags.push_back("gamma_zero");
    if (series.restarts > 0) pt.flags.push_back("precision_raised");
  } catch (const LedgerViolation&) {
    pt.flags.push_back("ledger_violation");
  } catch (const InvalidArgument&) {
    pt.flags.push_back("fit_failed");
  }
  return pt;
}

std::vector<GammaPoint> gamma_map(const GammaMapOptions& opts) {
  if (opts.theta1.empty() || opts.theta2.empty()) throw InvalidArgument("gamma_map needs a nonempty grid");
  if (opts.n_states < 1) throw InvalidArgument("gamma_map needs at least one initial state");
  const auto states = initial_states(opts.n_states, opts.seed);
  const std::size_t n2 = opts.theta2.size();
  std::vector<GammaPoint> out(opts.theta1.size() * n2);
  parallel_for(out.size(), opts.threads, [&](std::size_t i) {
    out[i] = gamma_point({opts.theta1[i / n2], opts.theta2[i % n2], opts.theta3}, opts, states);
  });
  return out;
}

template double cos_pi<double>(double);
template BigFloat cos_pi<BigFloat>(double);
template double sin_pi<double>(double);
template BigFloat sin_pi<BigFloat>(double);
template std::pair<CMatrix<double>, CMatrix<double>> qubit_gates<double>(const QubitAngles&, const PrecisionPolicy&);
template std::pair<CMatrix<BigFloat>, CMatrix<BigFloat>> qubit_gates<BigFloat>(const QubitAngles&,
                                                                               const PrecisionPolicy&);
template drive::DriveSpec<double> qubit_drive<double>(const QubitAngles&, const PrecisionPolicy&, unsigned);
template drive::DriveSpec<BigFloat> qubit_drive<BigFloat>(const QubitAngles&, const PrecisionPolicy&, unsigned);

}  // namespace chse::sweep

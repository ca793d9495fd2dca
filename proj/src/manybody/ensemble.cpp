#include "chse/manybody/ensemble.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <set>

#include "chse/parallel.hpp"

namespace chse::manybody {

namespace {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

Vec to_eigen(const State& s) { return Eigen::Map<const Vec>(s.data(), static_cast<Eigen::Index>(s.size())); }

Vec replicate(const State& psi, int k) {
  Vec out = to_eigen(psi);
  for (int r = 1; r < k; ++r) {
    Vec next(out.size() * static_cast<Eigen::Index>(psi.size()));
    for (Eigen::Index i = 0; i < out.size(); ++i)
      for (std::size_t j = 0; j < psi.size(); ++j) next(i * static_cast<Eigen::Index>(psi.size()) + j) = out(i) * psi[j];
    out = std::move(next);
  }
  return out;
}

CMatrix<double> from_eigen(const Mat& m) {
  CMatrix<double> out(m.rows(), m.cols(), PrecisionPolicy::hardware_double());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = Complex<double>(m(i, j).real(), m(i, j).imag());
  return out;
}

Mat to_eigen(const CMatrix<double>& m) {
  Mat out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = {m(i, j).re, m(i, j).im};
  return out;
}

double half_abs_eigensum(const Mat& h) {
  const Mat herm = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(herm, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw InternalError("Hermitian eigensolver did not converge");
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

std::size_t moment_side(std::size_t D, int k, std::size_t limit) {
  double side = 1.0;
  for (int r = 0; r < k; ++r) side *= static_cast<double>(D);
  return side <= static_cast<double>(limit) ? static_cast<std::size_t>(side) : 0;
}

void validate(const ChainGates& gates, const State& psi0, const std::vector<Window>& windows, const WindowedOptions& opts) {
  if (opts.k < 1) throw InvalidArgument("moment order k must be >= 1");
  if (psi0.size() != gates.dim()) throw DimensionError("initial state has the wrong dimension");
  if (std::abs(state_norm(psi0) - 1.0) > 1e-10) throw InvalidArgument("initial state is not normalised");
  if (windows.empty()) throw InvalidArgument("need at least one window");
  for (std::size_t i = 0; i < windows.size(); ++i) {
    if (windows[i].end <= windows[i].begin) throw InvalidArgument("empty window");
    if (i > 0 && windows[i].begin < windows[i - 1].end) throw InvalidArgument("windows must be disjoint and sorted");
  }
}

// Fills moments, cumulative moment and Δ from trajectory slices.
void finish_series(WindowedSeries& out, const std::vector<std::vector<State>>& slices, const WindowedOptions& opts) {
  const std::size_t D = out.dim;
  const std::size_t side = moment_side(D, opts.k, opts.dense_limit);
  const double sym = symmetric_dimension(D, opts.k);

  std::vector<Mat> sums;
  if (side) {
    sums.resize(slices.size());
    parallel_for(slices.size(), opts.threads, [&](std::size_t w) {
      Mat acc = Mat::Zero(side, side);
      for (const auto& psi : slices[w]) {
        const Vec v = replicate(psi, opts.k);
        acc.noalias() += v * v.adjoint();
      }
      sums[w] = std::move(acc);
    });
  }
  for (auto& s : slices)
    for (auto& psi : s) out.trajectory.push_back(psi);

  std::vector<std::size_t> ends;
  std::size_t total = 0;
  for (const auto& s : slices) ends.push_back(total += s.size());

  Mat gram;
  const bool any_gram = static_cast<double>(ends.front()) <= sym && ends.front() <= opts.gram_limit;
  if (any_gram) {
    std::size_t n = 0;
    for (std::size_t e : ends)
      if (static_cast<double>(e) <= sym && e <= opts.gram_limit) n = e;
    gram.resize(n, n);
    parallel_for(n, opts.threads, [&](std::size_t s) {
      const Vec a = to_eigen(out.trajectory[s]);
      for (std::size_t t = s; t < n; ++t) {
        std::complex<double> g = a.dot(to_eigen(out.trajectory[t]));  // conjugates a
        std::complex<double> p = g;
        for (int r = 1; r < opts.k; ++r) p *= g;
        gram(s, t) = p;
        gram(t, s) = std::conj(p);
      }
    });
  }

  std::vector<Mat> cumulative(slices.size());
  if (side) {
    Mat acc = Mat::Zero(side, side);
    for (std::size_t w = 0; w < slices.size(); ++w) {
      acc += sums[w];
      cumulative[w] = acc / static_cast<double>(ends[w]);
      out.window_moments.push_back(from_eigen(sums[w] / static_cast<double>(slices[w].size())));
    }
    out.cumulative = from_eigen(cumulative.back());
  }

  out.delta.assign(slices.size(), 0.0);
  parallel_for(slices.size(), opts.threads, [&](std::size_t w) {
    const std::size_t T = ends[w];
    if (static_cast<double>(T) <= sym && T <= opts.gram_limit && T <= static_cast<std::size_t>(gram.rows())) {
      const Mat g = gram.topLeftCorner(T, T) / static_cast<double>(T);
      Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
      if (es.info() != Eigen::Success) throw InternalError("Gram eigensolver did not converge");
      const double c = 1.0 / sym;
      double s = (sym - static_cast<double>(T)) * c;
      for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) s += std::abs(es.eigenvalues()(i) - c);
      out.delta[w] = 0.5 * s;
    } else if (side) {
      out.delta[w] = dense_delta(from_eigen(cumulative[w]), D, opts.k);
    } else {
      throw ResourceLimit("Δ at T = " + std::to_string(T) + " needs either T <= dim_sym and T <= gram_limit or D^k <= dense_limit");
    }
  });
}

}  // namespace

std::vector<Window> log_windows(std::size_t T, int per_decade) {
  if (T < 1 || per_decade < 1) throw InvalidArgument("log_windows: bad arguments");
  std::set<std::size_t> edges{0, T};
  const double top = std::log10(static_cast<double>(T));
  for (int i = 0; i <= static_cast<int>(std::ceil(top * per_decade)); ++i) {
    const auto e = static_cast<std::size_t>(std::llround(std::pow(10.0, static_cast<double>(i) / per_decade)));
    if (e < T) edges.insert(e);
  }
  std::vector<Window> out;
  for (auto it = edges.begin(); std::next(it) != edges.end(); ++it) out.push_back({*it, *std::next(it)});
  return out;
}

FastForward::FastForward(const ChainGates& gates, std::size_t t_max, std::size_t dense_limit)
    : gates_(&gates), t_max_(t_max), symbols_(drive::drive_symbols(gates.spec().m, 0.0, t_max)) {
  if (gates.spec().m != 1 || gates.dim() > dense_limit || t_max < 2) return;
  auto [a0, a1] = gates.dense();
  auto flat = [](const CMatrix<double>& m) {
    std::vector<std::complex<double>> v(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) v[i] = {m.data()[i].re, m.data()[i].im};
    return v;
  };
  const auto n = static_cast<Eigen::Index>(gates.dim());
  using RowMat = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  std::vector<RowMat> v;
  v.push_back(Eigen::Map<const RowMat>(flat(a1).data(), n, n));
  v.push_back(Eigen::Map<const RowMat>(flat(a0).data(), n, n));
  // V_j = U(S_j) for j ≥ 1; keep every block that can appear for T ≤ t_max.
  std::size_t s_prev = 1, s = 1;
  while (s_prev + s <= t_max) {
    RowMat next = v[v.size() - 2] * v.back();
    v.push_back(std::move(next));
    const std::size_t t = s_prev + s;
    s_prev = s;
    s = t;
  }
  for (const auto& m : v) blocks_.emplace_back(m.data(), m.data() + m.size());
}

State FastForward::step(const State& psi0, std::size_t from, std::size_t to) const {
  if (to > t_max_) throw InvalidArgument("fast-forward target beyond the prepared horizon");
  State psi = psi0;
  for (std::size_t t = from; t < to; ++t) gates_->apply(symbols_[t], psi);
  return psi;
}

State FastForward::advance(const State& psi0, std::size_t T) const {
  if (T > t_max_) throw InvalidArgument("fast-forward target beyond the prepared horizon");
  if (T == 0 || blocks_.empty()) return step(psi0, 0, T);
  const auto n = static_cast<Eigen::Index>(gates_->dim());
  using RowMat = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Vec psi = to_eigen(psi0);
  // Largest block first; U(F_c) = V_{c-1}.
  for (unsigned c : words::zeckendorf(mpz_class(static_cast<unsigned long>(T)))) {
    if (c - 1 >= blocks_.size()) throw InternalError("Zeckendorf block missing");
    const Eigen::Map<const RowMat> v(blocks_[c - 1].data(), n, n);
    psi = v * psi;
  }
  return State(psi.data(), psi.data() + psi.size());
}

double symmetric_dimension(std::size_t D, int k) {
  double s = 1.0;
  for (int i = 0; i < k; ++i) s = s * static_cast<double>(D + i) / static_cast<double>(i + 1);
  return s;
}

double gram_delta(const std::vector<State>& states, std::size_t T, int k) {
  if (T < 1 || T > states.size()) throw InvalidArgument("gram_delta: T out of range");
  const double sym = symmetric_dimension(states.front().size(), k);
  if (static_cast<double>(T) > sym) throw InvalidArgument("gram_delta needs T <= dim_sym");
  Mat g(T, T);
  for (std::size_t s = 0; s < T; ++s) {
    const Vec a = to_eigen(states[s]);
    for (std::size_t t = s; t < T; ++t) {
      const std::complex<double> x = a.dot(to_eigen(states[t]));
      std::complex<double> p = x;
      for (int r = 1; r < k; ++r) p *= x;
      g(s, t) = p / static_cast<double>(T);
      g(t, s) = std::conj(p) / static_cast<double>(T);
    }
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
  const double c = 1.0 / sym;
  double sum = (sym - static_cast<double>(T)) * c;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) sum += std::abs(es.eigenvalues()(i) - c);
  return 0.5 * sum;
}

double dense_delta(const CMatrix<double>& moment, std::size_t D, int k) {
  const std::size_t side = moment_side(D, k, std::size_t{1} << 14);
  if (!side || moment.rows() != side || !moment.is_square()) throw DimensionError("dense_delta: moment has the wrong side");
  Mat m = to_eigen(moment);
  if (k == 1) {
    m -= Mat::Identity(side, side) / static_cast<double>(D);
  } else {
    m -= to_eigen(haar::haar_moment_state<double>(D, k, PrecisionPolicy::hardware_double()).matrix);
  }
  return half_abs_eigensum(m);
}

WindowedSeries windowed_moment_series(const ChainGates& gates, const State& psi0, const std::vector<Window>& windows,
                                      const WindowedOptions& opts) {
  validate(gates, psi0, windows, opts);
  const FastForward ff(gates, windows.back().end, opts.fast_forward_limit);
  std::vector<std::vector<State>> slices(windows.size());
  parallel_for(windows.size(), opts.threads, [&](std::size_t w) {
    State psi = ff.advance(psi0, windows[w].begin);
    auto& slice = slices[w];
    slice.reserve(windows[w].length());
    for (std::size_t t = windows[w].begin; t < windows[w].end; ++t) {
      if (t > windows[w].begin) gates.apply(ff.symbols()[t - 1], psi);
      slice.push_back(psi);
    }
  });
  WindowedSeries out;
  out.k = opts.k;
  out.dim = gates.dim();
  out.windows = windows;
  finish_series(out, slices, opts);
  return out;
}

WindowedSeries single_pass_series(const ChainGates& gates, const State& psi0, const std::vector<Window>& windows,
                                  const WindowedOptions& opts) {
  validate(gates, psi0, windows, opts);
  const auto symbols = drive::drive_symbols(gates.spec().m, 0.0, windows.back().end);
  std::vector<std::vector<State>> slices(windows.size());
  State psi = psi0;
  std::size_t t = 0;
  for (std::size_t w = 0; w < windows.size(); ++w) {
    for (; t < windows[w].end; ++t) {
      if (t > 0) gates.apply(symbols[t - 1], psi);
      if (t >= windows[w].begin) slices[w].push_back(psi);
    }
  }
  WindowedSeries out;
  out.k = opts.k;
  out.dim = gates.dim();
  out.windows = windows;
  finish_series(out, slices, opts);
  return out;
}

std::vector<State> product_initial_states(unsigned L, unsigned n_states, std::uint64_t seed) {
  std::vector<State> out;
  for (unsigned s = 0; s < n_states; ++s) {
    std::mt19937_64 rng(mix_seed(seed, s));
    out.push_back(random_product_state(L, rng));
  }
  return out;
}

ManybodyResult manybody_series(const ManybodyOptions& opts) {
  if (opts.n_states < 1) throw InvalidArgument("manybody needs at least one initial state");
  const ChainGates gates(opts.chain);
  ManybodyResult res;
  res.windows = log_windows(opts.t_max, opts.per_decade);
  const auto states = product_initial_states(opts.chain.L, opts.n_states, opts.seed);
  WindowedOptions wopts = opts.windowed;
  wopts.k = opts.k;
  std::vector<std::vector<double>> deltas(states.size());
  std::vector<double> deviation(states.size(), -1.0);
  for (std::size_t s = 0; s < states.size(); ++s) {
    const auto series = windowed_moment_series(gates, states[s], res.windows, wopts);
    deltas[s] = series.delta;
    if (opts.check_single_pass) {
      const auto single = single_pass_series(gates, states[s], res.windows, wopts);
      double dev = 0.0;
      for (std::size_t w = 0; w < series.delta.size(); ++w)
        dev = std::max(dev, std::abs(series.delta[w] - single.delta[w]));
      if (!series.cumulative.empty()) dev = std::max(dev, max_abs_diff(series.cumulative, single.cumulative));
      deviation[s] = dev;
    }
  }
  for (double d : deviation) res.single_pass_deviation = std::max(res.single_pass_deviation, d);
  std::vector<double> x, y;
  for (std::size_t w = 0; w < res.windows.size(); ++w) {
    ManybodyPoint p;
    p.t = res.windows[w].end;
    for (const auto& d : deltas) {
      p.state_delta.push_back(d[w]);
      p.delta += d[w];
    }
    p.delta /= static_cast<double>(deltas.size());
    if (static_cast<double>(p.t) >= opts.fit_t_min) {
      x.push_back(std::log(static_cast<double>(p.t)));
      y.push_back(std::log(p.delta));
    }
    res.points.push_back(std::move(p));
  }
  try {
    res.fit = sweep::linear_fit(x, y);
    res.fit_ok = true;
  } catch (const InvalidArgument&) {
    res.fit_ok = false;
  }
  return res;
}

sweep::FitResult exp_fit(const std::vector<double>& t, const std::vector<double>& delta) {
  std::vector<double> y;
  for (double d : delta) {
    if (!(d > 0.0)) throw InvalidArgument("exp_fit: nonpositive Δ");
    y.push_back(std::log(d));
  }
  return sweep::linear_fit(t, y);
}

}  // namespace chse::manybody

// Acceptance checks. `chse_acceptance <name>` runs one check, no argument runs
// all of them. Each prints one line: PASS|FAIL <name>: <measurements>.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "chse/cli/run.hpp"
#include "chse/drive/decay.hpp"
#include "chse/manybody/deep_therm.hpp"
#include "chse/manybody/ensemble.hpp"
#include "chse/parallel.hpp"
#include "chse/stationary/stationary.hpp"
#include "chse/sweep/sweep.hpp"

using namespace chse;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

const PrecisionPolicy kDouble = PrecisionPolicy::hardware_double();

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

Verdict word_prefixes() {
  const std::string m1 = "0100101001001", m2 = "0010010001001";
  auto str = [](const words::Symbols& s) {
    std::string out;
    for (auto x : s) out += static_cast<char>('0' + x);
    return out;
  };
  const auto w1 = str(words::fib_word_concat(1, 13).symbols);
  const auto w2 = str(words::fib_word_concat(2, 13).symbols);
  return {w1 == m1 && w2 == m2, "m=1 " + w1 + ", m=2 " + w2};
}

Verdict rotation_equivalence() {
  std::string detail;
  bool ok = true;
  for (unsigned m = 1; m <= 3; ++m) {
    const auto rot = words::code_rotation(m, 0.0, 100000);
    const auto cat = words::fib_word_concat(m, 100000);
    std::size_t mismatch = 0;
    for (std::size_t i = 0; i < cat.size(); ++i) mismatch += rot.symbols[i] != cat.symbols[i];
    ok = ok && mismatch == 0 && rot.size() == cat.size();
    detail += "m=" + std::to_string(m) + " mismatches " + std::to_string(mismatch) + "; ";
  }
  return {ok, detail};
}

Verdict complexity() {
  bool ok = true;
  std::string detail;
  const auto fib = words::fib_word_concat(1, 10000);
  for (unsigned n = 1; n <= 20; ++n)
    if (words::symbolic_complexity(fib.symbols, n) != n + 1) {
      ok = false;
      detail += "fib n=" + std::to_string(n) + " wrong; ";
    }
  const auto coin = drive::coin_sequence(0.5, 100000, 12345);
  for (unsigned n = 1; n <= 10; ++n)
    if (words::symbolic_complexity(coin, n) != (1u << n)) {
      ok = false;
      detail += "random n=" + std::to_string(n) + " wrong; ";
    }
  if (ok) detail = "fib n+1 for n<=20, random 2^n for n<=10";
  return {ok, detail};
}

Verdict channel_recursion() {
  double worst = 0.0;
  std::mt19937_64 rng(7);
  for (unsigned m = 1; m <= 3; ++m) {
    auto a0 = haar::sample_haar_unitary<double>(2, rng, kDouble);
    auto a1 = haar::sample_haar_unitary<double>(2, rng, kDouble);
    const auto spec = drive::make_spec<double>(m, a0, a1);
    const auto S = words::gen_fib_numbers(m, 40);
    unsigned n_top = 1;
    while (S[n_top + 1] <= 10000) ++n_top;
    for (int k : {1, 2}) {
      // Direct running sum over t < S_n, compared at every Fibonacci index.
      const std::size_t side = k == 1 ? 4 : 16;
      CMatrix<double> acc(side, side, kDouble);
      CMatrix<double> u = CMatrix<double>::identity(2, kDouble);
      const auto symbols = drive::drive_symbols(m, 0.0, S[n_top].get_ui());
      unsigned next = 1;
      for (std::size_t t = 0; t < S[n_top].get_ui(); ++t) {
        acc += drive::unitary_channel(u, k);
        u = (symbols[t] ? a1 : a0) * u;
        while (next <= n_top && S[next] == t + 1) {
          CMatrix<double> direct = acc;
          direct *= 1.0 / static_cast<double>(t + 1);
          const auto rec = drive::avg_channel_recursive(spec, k, next);
          worst = std::max(worst, max_abs_diff(rec.matrix, direct));
          ++next;
        }
      }
    }
  }
  return {worst <= 1e-12, "max entry deviation " + num(worst)};
}

Verdict haar_moments() {
  double worst = 0.0;
  for (int k = 1; k <= 3; ++k) {
    const auto mc = haar::mc_haar_moment(2, k, 100000, 100 + k);
    worst = std::max(worst, haar::trace_distance(mc.matrix, haar::haar_moment_state<double>(2, k, kDouble).matrix));
  }
  auto expect = CMatrix<double>::identity(4, kDouble) + haar::replica_permutation<double>(2, {1, 0}, kDouble);
  expect *= 1.0 / 6.0;
  const double exact = max_abs_diff(haar::haar_moment_state<double>(2, 2, kDouble).matrix, expect);
  return {worst <= 1e-2 && exact <= 1e-16, "MC trace distance " + num(worst) + ", (2,2) deviation " + num(exact)};
}

Verdict no_go_bound() {
  std::mt19937_64 rng(2024);
  double margin = 1e9;
  bool chain = true;
  for (std::size_t d = 2; d <= 5; ++d)
    for (int i = 0; i < 100; ++i) {
      const auto ham = stationary::make_hamiltonian(stationary::random_hermitian(d, rng), haar::random_state(d, rng));
      const auto cert = stationary::delta2_time_independent(ham);
      margin = std::min(margin, cert.delta - cert.bound);
      chain = chain && cert.chain_holds;
    }
  return {margin >= -1e-12 && chain, "min Δ − B(d) " + num(margin) + ", chain " + (chain ? "holds" : "broken")};
}

Verdict lemma() {
  bool ok = true;
  std::string detail;
  for (std::size_t d = 2; d <= 4; ++d) {
    const double dd = static_cast<double>(d);
    const double xi = std::sqrt(2.0 / (dd * (dd + 1.0)));
    const double brute = stationary::brute_min_F(d, xi, 1e-3);
    const double floor = xi * xi * (dd - 1.0 / xi);
    ok = ok && brute >= floor - 5e-3;
    detail += "d=" + std::to_string(d) + " min " + num(brute) + " vs " + num(floor) + "; ";
  }
  return {ok, detail};
}

drive::DecaySeries qubit_series(const sweep::QubitAngles& a, const std::vector<std::complex<double>>& state,
                                unsigned n_max, unsigned bits) {
  return drive::decay_series_ladder([&] { return sweep::qubit_drive<double>(a, kDouble); },
                                    [&](const PrecisionPolicy& p) { return sweep::qubit_drive<BigFloat>(a, p); }, 2,
                                    {state}, n_max, {bits, bits, 1e-3});
}

Verdict single_qubit_decay() {
  const auto angles = sweep::from_xz(0.39, 0.39);
  const double r = 1.0 / std::sqrt(2.0);
  const double bound = stationary::bound_B<double>(2);
  std::vector<sweep::FitResult> fits;
  bool below = true;
  for (const auto& st : {std::vector<std::complex<double>>{1.0, 0.0}, std::vector<std::complex<double>>{r, r}}) {
    const auto series = qubit_series(angles, st, 200, 512);
    below = below && std::stod(series.points.back().delta) < bound;
    fits.push_back(sweep::powerlaw_fit(series.points));
  }
  const double diff = std::abs(fits[0].gamma - fits[1].gamma);
  const double tol = std::max(0.05, 3.0 * std::hypot(fits[0].stderr_gamma, fits[1].stderr_gamma));
  const bool ok = below && fits[0].gamma > 0.0 && fits[1].gamma > 0.0 && diff <= tol;
  return {ok, "γ|0⟩ " + num(fits[0].gamma) + " ± " + num(fits[0].stderr_gamma) + ", γ|+⟩ " + num(fits[1].gamma) +
                  " ± " + num(fits[1].stderr_gamma) + ", |Δγ| " + num(diff) + " (tol " + num(tol) + "), below B(2) " +
                  (below ? "yes" : "no")};
}

Verdict degenerate_points() {
  sweep::GammaMapOptions opts;
  opts.theta1 = {0.1, 0.2, 0.3, 0.39};  // θ_Z
  opts.theta2 = {0.0, 0.5};             // θ_X
  opts.n_max = 200;
  opts.n_states = 2;
  opts.ladder = {512, 1024, 1e-3};
  const auto pts = sweep::gamma_map(opts);
  double worst = 0.0;
  bool fitted = true;
  for (const auto& p : pts) {
    if (p.fit.last == 0) fitted = false;
    worst = std::max(worst, std::abs(p.fit.gamma));
  }
  return {fitted && worst <= 0.02, "max |γ| over " + std::to_string(pts.size()) + " points " + num(worst)};
}

Verdict coin_baseline() {
  const std::uint64_t seed = 1;
  const auto a0 = haar::sample_haar_unitary<double>(2, mix_seed(seed, 0), kDouble);
  const auto a1 = haar::sample_haar_unitary<double>(2, mix_seed(seed, 1), kDouble);
  const auto symbols = drive::coin_sequence(0.5, 1000, mix_seed(seed, 2));
  std::mt19937_64 rng(mix_seed(seed, 100));
  const std::vector<CMatrix<double>> psi{haar::random_state(2, rng)};
  const auto pts = drive::sequence_decay(a0, a1, symbols, 2, psi, drive::log_spaced_times(1, 1000, 10));
  const auto fit = sweep::powerlaw_fit(pts);
  const double final_delta = std::stod(pts.back().delta);
  const double slope = -fit.gamma;
  return {final_delta < stationary::bound_B<double>(2) && std::abs(slope + 0.5) <= 0.2,
          "Δ(1000) " + num(final_delta) + ", slope " + num(slope)};
}

Verdict manybody_trend(int k) {
  manybody::ManybodyOptions opts;
  opts.chain = {8, 1.0, 0.1, 1};
  opts.k = k;
  opts.t_max = 1000;
  opts.n_states = 10;
  opts.check_single_pass = true;
  const auto res = manybody::manybody_series(opts);
  const double slope = -res.fit.gamma;
  const bool ok = res.fit_ok && slope >= -0.7 && slope <= -0.3 && res.single_pass_deviation >= 0.0 &&
                  res.single_pass_deviation <= 1e-12;
  return {ok, "slope " + num(slope) + ", Δ(1000) " + num(res.points.back().delta) + ", windowed vs single pass " +
                  num(res.single_pass_deviation)};
}

Verdict zeckendorf_fast_forward() {
  const auto spec = manybody::chain_drive({6, 1.0, 0.1, 1});
  std::mt19937_64 rng(99);
  std::vector<std::size_t> times;
  for (int i = 0; i < 100; ++i) times.push_back(1 + rng() % 10000);
  std::sort(times.begin(), times.end());
  // direct products along the word, compared as T passes each sample
  const auto symbols = drive::drive_symbols(1, 0.0, times.back());
  CMatrix<double> u = CMatrix<double>::identity(spec.d, kDouble);
  double worst = 0.0;
  std::size_t next = 0;
  for (std::size_t t = 0; t < times.back(); ++t) {
    u = (symbols[t] ? spec.A1 : spec.A0) * u;
    while (next < times.size() && times[next] == t + 1) {
      const auto z = drive::u_zeckendorf(spec, mpz_class(static_cast<unsigned long>(t + 1)));
      worst = std::max(worst, operator_norm(z - u));
      ++next;
    }
  }
  return {worst <= 1e-10, "max operator-norm difference " + num(worst)};
}

Verdict deep_thermalization() {
  std::vector<double> log_db, log_plateau;
  bool ok = true;
  std::string detail;
  for (unsigned L : {8u, 10u, 12u}) {
    manybody::DeepThermOptions opts;
    opts.chain = {L, 1.0, 0.1, 1};
    const auto res = manybody::deep_therm_series(opts);
    const double lambda = res.fit.gamma;
    const bool lam_ok = res.fit_ok && lambda >= 0.09 / 3.0 && lambda <= 0.09 * 3.0;
    const double ratio = res.plateau / res.reference;
    const bool plat_ok = ratio >= 1.0 / 3.0 && ratio <= 3.0;
    ok = ok && lam_ok && plat_ok;
    detail += "L=" + std::to_string(L) + " λ " + num(lambda) + " plateau/ref " + num(ratio) + "; ";
    log_db.push_back(std::log(std::pow(2.0, L - opts.n_a)));
    log_plateau.push_back(std::log(res.plateau));
  }
  const auto fit = sweep::linear_fit(log_db, log_plateau, 3);
  const double slope = -fit.gamma;
  ok = ok && std::abs(slope + 0.5) <= 0.15;
  return {ok, detail + "plateau slope vs d_B " + num(slope)};
}

Verdict precision_ledger() {
  const auto angles = sweep::from_xz(0.39, 0.39);
  std::mt19937_64 rng(5);
  const auto v = haar::random_state(2, rng);
  const std::vector<std::complex<double>> st{{v(0, 0).re, v(0, 0).im}, {v(1, 0).re, v(1, 0).im}};
  bool green = true;
  double worst = -1e300;
  std::size_t n_points = 0;
  try {
    const auto series = qubit_series(angles, st, 200, 512);
    n_points = series.points.size();
    for (const auto& p : series.points) {
      const double margin = p.log10_epsilon - (std::log10(1e-3) + p.log_delta / std::log(10.0));
      worst = std::max(worst, margin);
      green = green && margin <= 0.0;
    }
  } catch (const LedgerViolation&) {
    green = false;
  }
  // a run that cannot hold the ledger has to abort with exit code 3
  const char* argv[] = {"chse", "trace-distance", "--bits", "64", "--n-max", "60", "--out", "acceptance-ledger-out"};
  std::ostringstream out, err;
  const int code = cli::cli_main(8, argv, out, err);
  return {green && n_points == 200 && code == 3,
          std::to_string(n_points) + " points, max log10(ε/(1e-3·Δ)) " + num(worst) + ", violating run exit " +
              std::to_string(code)};
}

const std::vector<std::pair<std::string, std::function<Verdict()>>>& checks() {
  static const std::vector<std::pair<std::string, std::function<Verdict()>>> all = {
      {"word_prefixes", word_prefixes},
      {"rotation_equivalence", rotation_equivalence},
      {"symbolic_complexity", complexity},
      {"channel_recursion", channel_recursion},
      {"haar_moments", haar_moments},
      {"no_go_bound", no_go_bound},
      {"lemma_oracle", lemma},
      {"single_qubit_decay", single_qubit_decay},
      {"degenerate_points", degenerate_points},
      {"coin_baseline", coin_baseline},
      {"manybody_trend_k1", [] { return manybody_trend(1); }},
      {"manybody_trend_k2", [] { return manybody_trend(2); }},
      {"zeckendorf_fast_forward", zeckendorf_fast_forward},
      {"deep_thermalization", deep_thermalization},
      {"precision_ledger", precision_ledger},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string only = argc > 1 ? argv[1] : "";
  bool all_pass = true;
  bool found = false;
  for (const auto& [name, fn] : checks()) {
    if (!only.empty() && name != only) continue;
    found = true;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << " [" << num(secs) << " s]" << std::endl;
    all_pass = all_pass && v.pass;
  }
  if (!found) {
    std::cerr << "unknown check '" << only << "'\n";
    return 2;
  }
  return all_pass ? 0 : 1;
}

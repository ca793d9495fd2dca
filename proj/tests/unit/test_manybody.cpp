#include <algorithm>
#include <random>

#include "chse/manybody/deep_therm.hpp"
#include "chse/manybody/ensemble.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace chse;
using namespace chse::manybody;
using testing::dbl;

namespace {

CMatrix<double> as_column(const State& psi) {
  return CMatrix<double>::from_values(psi.size(), 1, psi, dbl());
}

double overlap_abs(const State& a, const State& b) {
  std::complex<double> s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return std::abs(s);
}

State random_state(std::size_t D, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto v = haar::random_state(D, rng);
  State s(D);
  for (std::size_t i = 0; i < D; ++i) s[i] = {v(i, 0).re, v(i, 0).im};
  return s;
}

}  // namespace

TEST_SUITE("manybody") {
  TEST_CASE("two-site Hamiltonians") {
    const ChainSpec spec{2, 1.0, 0.1, 1};
    auto [h0, h1] = chain_hamiltonians(spec);
    const auto x = pauli_x<double>(dbl()), z = pauli_z<double>(dbl());
    const auto id = CMatrix<double>::identity(2, dbl());
    auto expect1 = kron(z, id) + kron(id, z) + kron(z, z);
    auto edge = kron(id, z);
    edge *= 0.1;
    expect1 += edge;
    auto expect0 = kron(x, id) + kron(id, x) + kron(x, x);
    auto edge0 = kron(id, x);
    edge0 *= 0.1;
    expect0 += edge0;
    CHECK(max_abs_diff(h1, expect1) < 1e-15);
    CHECK(max_abs_diff(h0, expect0) < 1e-15);
  }

  TEST_CASE("H0 is H1 conjugated by Hadamards") {
    const ChainSpec spec{4, 0.7, 0.1, 1};
    auto [h0, h1] = chain_hamiltonians(spec);
    const double r = 1.0 / std::sqrt(2.0);
    const auto w = tensor_power(testing::mat(2, 2, {r, r, r, -r}), 4);
    CHECK(max_abs_diff(w * h1 * w, h0) < 1e-13);
  }

  TEST_CASE("spectrum of H0 matches the Z energies") {
    const ChainSpec spec{3, 1.0, 0.1, 1};
    auto e = chain_z_energies(spec);
    std::sort(e.begin(), e.end());
    const auto es = eig_hermitian(chain_hamiltonians(spec).first, false);
    for (std::size_t i = 0; i < e.size(); ++i) CHECK(es.values[i] == doctest::Approx(e[i]).epsilon(1e-12));
    // |000⟩: three fields, two bonds, edge
    CHECK(chain_z_energies(spec)[0] == doctest::Approx(5.1));
  }

  TEST_CASE("gates against matrix exponentials") {
    for (unsigned L : {2u, 3u, 5u}) {
      const ChainSpec spec{L, 0.83, 0.1, 1};
      auto [h0, h1] = chain_hamiltonians(spec);
      auto [a0, a1] = ChainGates(spec).dense();
      CHECK(max_abs_diff(a0, expm_hermitian(h0, spec.tau)) < 1e-12);
      CHECK(max_abs_diff(a1, expm_hermitian(h1, spec.tau)) < 1e-12);
      CHECK(unitarity_error(a0) < 1e-13);
    }
    auto [i0, i1] = ChainGates({4, 0.0, 0.1, 1}).dense();
    CHECK(max_abs_diff(i0, CMatrix<double>::identity(16, dbl())) == 0.0);
    CHECK(max_abs_diff(i1, CMatrix<double>::identity(16, dbl())) == 0.0);
    CHECK_THROWS_AS(chain_dim({1, 1.0, 0.1, 1}), InvalidArgument);
  }

  TEST_CASE("matrix-free gates preserve the norm") {
    const ChainGates gates({12, 1.0, 0.1, 1});
    std::mt19937_64 rng(4);
    auto psi = random_product_state(12, rng);
    CHECK(state_norm(psi) == doctest::Approx(1.0).epsilon(1e-14));
    for (int t = 0; t < 50; ++t) gates.apply(t % 3 == 0, psi);
    CHECK(state_norm(psi) == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("product states") {
    const double r = 1.0 / std::sqrt(2.0);
    const auto plus = product_state(3, r, r);
    for (const auto& a : plus) CHECK(std::abs(a - std::complex<double>(std::pow(r, 3))) < 1e-15);
    const auto s1 = product_initial_states(4, 3, 9);
    const auto s2 = product_initial_states(4, 3, 9);
    CHECK(s1 == s2);
    CHECK(s1[0] != s1[1]);
  }

  TEST_CASE("fast-forward agrees with stepping") {
    const ChainGates gates({6, 1.0, 0.1, 1});
    const FastForward ff(gates, 2000);
    CHECK(ff.uses_zeckendorf());
    const FastForward slow(gates, 2000, 0);
    CHECK_FALSE(slow.uses_zeckendorf());
    const auto psi0 = product_initial_states(6, 1, 3)[0];
    for (std::size_t T : {1u, 2u, 7u, 100u, 1597u, 1999u}) {
      CHECK(overlap_abs(ff.advance(psi0, T), slow.advance(psi0, T)) == doctest::Approx(1.0).epsilon(1e-10));
    }
    // the word prefix drives the stepping
    auto psi = psi0;
    for (std::size_t t = 0; t < 5; ++t) gates.apply(ff.symbols()[t], psi);
    CHECK(overlap_abs(psi, ff.advance(psi0, 5)) == doctest::Approx(1.0).epsilon(1e-13));
  }

  TEST_CASE("log windows tile the range") {
    const auto w = log_windows(1000, 20);
    CHECK(w.front().begin == 0);
    CHECK(w.back().end == 1000);
    for (std::size_t i = 1; i < w.size(); ++i) {
      CHECK(w[i].begin == w[i - 1].end);
      CHECK(w[i].length() > 0);
    }
  }

  TEST_CASE("Gram and dense routes agree") {
    for (int k : {1, 2}) {
      const std::size_t D = 4;
      std::vector<State> states;
      for (int i = 0; i < 3; ++i) states.push_back(random_state(D, 40 + i));
      std::size_t side = 1;
      for (int i = 0; i < k; ++i) side *= D;
      CMatrix<double> moment(side, side, dbl());
      for (const auto& s : states) moment += haar::pure_moment(as_column(s), k).matrix;
      moment *= 1.0 / 3.0;
      CHECK(gram_delta(states, 3, k) == doctest::Approx(dense_delta(moment, D, k)).epsilon(1e-10));
    }
    CHECK(symmetric_dimension(4, 2) == 10.0);
    CHECK(symmetric_dimension(256, 2) == 32896.0);
  }

  TEST_CASE("windowed series equals a single pass") {
    const ChainGates gates({4, 1.0, 0.1, 1});
    const auto psi0 = product_initial_states(4, 1, 2)[0];
    const std::vector<Window> two{{0, 37}, {37, 120}};
    WindowedOptions opts;
    opts.k = 1;
    const auto a = windowed_moment_series(gates, psi0, two, opts);
    const auto b = single_pass_series(gates, psi0, two, opts);
    REQUIRE(a.delta.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(a.delta[i] - b.delta[i]) <= 1e-12);
    CHECK(max_abs_diff(a.cumulative, b.cumulative) <= 1e-12);
  }

  TEST_CASE("Δ starts near 1 − T/D for k = 1") {
    ManybodyOptions opts;
    opts.chain = {6, 1.0, 0.1, 1};
    opts.t_max = 40;
    opts.n_states = 2;
    opts.check_single_pass = true;
    const auto res = manybody_series(opts);
    REQUIRE_FALSE(res.points.empty());
    CHECK(res.points.front().delta <= 1.0);
    CHECK(res.points.back().delta < res.points.front().delta);
    CHECK(res.single_pass_deviation >= 0.0);
    CHECK(res.single_pass_deviation <= 1e-12);
    // T orthogonal-ish states on a D-dimensional space cannot beat 1 − T/D
    for (const auto& p : res.points) CHECK(p.delta >= 1.0 - static_cast<double>(p.t) / 64.0 - 1e-12);
  }

  TEST_CASE("exponential fit") {
    std::vector<double> t, d;
    for (int i = 0; i < 20; ++i) {
      t.push_back(i);
      d.push_back(2.0 * std::exp(-0.3 * i));
    }
    const auto fit = exp_fit(t, d);
    CHECK(fit.gamma == doctest::Approx(0.3));
    CHECK(std::exp(fit.intercept) == doctest::Approx(2.0));
  }

  TEST_CASE("projected ensemble of simple states") {
    // (|0⟩ + i|1⟩)/√2 on A, |01⟩ on B: one outcome
    const double r = 1.0 / std::sqrt(2.0);
    State psi(8, 0.0);
    psi[0 * 4 + 1] = r;
    psi[1 * 4 + 1] = std::complex<double>(0.0, r);
    const auto ens = projected_ensemble(psi, 3, 1);
    REQUIRE(ens.states.size() == 1);
    CHECK(ens.outcomes[0] == 1);
    CHECK(ens.p[0] == doctest::Approx(1.0));
    CHECK(ens.leakage == 0.0);
    CHECK(std::abs(ens.states[0][1] / ens.states[0][0] - std::complex<double>(0.0, 1.0)) < 1e-15);
    CHECK(delta_E(projected_moment(ens, 1)) == doctest::Approx(0.5));
    // Bell pair: the k = 1 ensemble average is maximally mixed
    State bell{r, 0.0, 0.0, r};
    const auto bens = projected_ensemble(bell, 2, 1);
    CHECK(bens.states.size() == 2);
    CHECK(delta_E(projected_moment(bens, 1)) < 1e-15);
    CHECK(delta_E(projected_moment(bens, 2)) > 0.1);
    CHECK_THROWS_AS(projected_ensemble(bell, 2, 2), InvalidArgument);
  }

  TEST_CASE("first projected moment is the reduced state") {
    const auto psi = random_state(32, 77);
    const auto ens = projected_ensemble(psi, 5, 2);
    const auto rho = outer(as_column(psi), as_column(psi));
    const auto red = partial_trace(rho, {4, 8}, {0});
    CHECK(max_abs_diff(projected_moment(ens, 1).matrix, red) < 1e-14);
    double total = 0.0;
    for (double p : ens.p) total += p;
    CHECK(total + ens.leakage == doctest::Approx(1.0));
  }

  TEST_CASE("Haar reference shrinks with the bath") {
    const double small = haar_projected_reference(4, 4, 1, 200, 1);
    const double large = haar_projected_reference(4, 64, 1, 200, 1);
    CHECK(large < small);
    CHECK(haar_projected_reference(4, 16, 1, 50, 3, 1) == haar_projected_reference(4, 16, 1, 50, 3, 2));
  }

  TEST_CASE("deep thermalisation at L = 6") {
    DeepThermOptions opts;
    opts.chain = {6, 1.0, 0.1, 1};
    opts.t_max = 60;
    opts.n_states = 2;
    opts.ref_samples = 50;
    const auto res = deep_therm_series(opts);
    REQUIRE(res.points.size() == 61);
    CHECK(res.points.front().delta_E > res.plateau);
    CHECK(res.plateau > 0.0);
    CHECK(res.reference > 0.0);
  }
}

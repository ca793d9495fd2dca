#include "chse/manybody/chain.hpp"

#include <bit>
#include <cmath>

#include "chse/haar/haar.hpp"

namespace chse::manybody {

namespace {

std::size_t site_mask(unsigned L, unsigned j) { return std::size_t{1} << (L - j); }

}  // namespace

std::size_t chain_dim(const ChainSpec& spec) {
  if (spec.L < 2) throw InvalidArgument("chain needs L >= 2");
  if (spec.L > 24) throw ResourceLimit("chain length " + std::to_string(spec.L) + " exceeds the state-vector budget (24)");
  if (!std::isfinite(spec.tau) || !std::isfinite(spec.edge)) throw InvalidArgument("chain parameters must be finite");
  if (spec.m < 1) throw InvalidArgument("word order m must be >= 1");
  return std::size_t{1} << spec.L;
}

std::vector<double> chain_z_energies(const ChainSpec& spec) {
  const std::size_t dim = chain_dim(spec);
  std::vector<double> e(dim);
  for (std::size_t z = 0; z < dim; ++z) {
    double total = 0.0;
    double prev = 0.0;
    for (unsigned j = 1; j <= spec.L; ++j) {
      const double s = (z & site_mask(spec.L, j)) ? -1.0 : 1.0;
      total += s;
      if (j > 1) total += prev * s;
      prev = s;
    }
    total += spec.edge * prev;
    e[z] = total;
  }
  return e;
}

std::pair<CMatrix<double>, CMatrix<double>> chain_hamiltonians(const ChainSpec& spec) {
  if (spec.L > 12) throw ResourceLimit("dense chain Hamiltonians are limited to L <= 12");
  const std::size_t dim = chain_dim(spec);
  const auto policy = PrecisionPolicy::hardware_double();
  const auto e = chain_z_energies(spec);
  CMatrix<double> h1(dim, dim, policy);
  for (std::size_t z = 0; z < dim; ++z) h1(z, z) = Complex<double>(e[z]);
  // H0 = W H1 W with W the L-fold Hadamard, W_{xz} = (−1)^{x·z} / √dim.
  CMatrix<double> w(dim, dim, policy);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (std::size_t x = 0; x < dim; ++x)
    for (std::size_t z = 0; z < dim; ++z) w(x, z) = Complex<double>((std::popcount(x & z) & 1) ? -scale : scale);
  CMatrix<double> h0 = w * h1 * w;
  return {std::move(h0), std::move(h1)};
}

ChainGates::ChainGates(const ChainSpec& spec) : spec_(spec), dim_(chain_dim(spec)) {
  const auto e = chain_z_energies(spec);
  phases_.resize(dim_);
  for (std::size_t z = 0; z < dim_; ++z) phases_[z] = std::polar(1.0, -spec.tau * e[z]);
  auto add = [&](std::size_t mask, double coeff) {
    const double theta = spec.tau * coeff;
    factors_.push_back({mask, std::cos(theta), std::sin(theta)});
  };
  for (unsigned j = 1; j <= spec.L; ++j) add(site_mask(spec.L, j), j == spec.L ? 1.0 + spec.edge : 1.0);
  for (unsigned j = 2; j <= spec.L; ++j) add(site_mask(spec.L, j - 1) | site_mask(spec.L, j), 1.0);
}

void ChainGates::apply_a1(State& psi) const {
  if (psi.size() != dim_) throw DimensionError("state has the wrong dimension for this chain");
  for (std::size_t z = 0; z < dim_; ++z) psi[z] *= phases_[z];
}

void ChainGates::apply_a0(State& psi) const {
  if (psi.size() != dim_) throw DimensionError("state has the wrong dimension for this chain");
  // exp(−iθP) = cos θ − i sin θ P for a Pauli string P that flips `mask`.
  for (const auto& f : factors_) {
    const std::complex<double> mis(0.0, -f.s);
    const std::size_t low = f.mask & (~f.mask + 1);  // lowest flipped bit pairs z with z ^ mask
    for (std::size_t z = 0; z < dim_; ++z) {
      if (z & low) continue;
      const std::size_t w = z ^ f.mask;
      const auto a = psi[z];
      const auto b = psi[w];
      psi[z] = f.c * a + mis * b;
      psi[w] = f.c * b + mis * a;
    }
  }
}

std::pair<CMatrix<double>, CMatrix<double>> ChainGates::dense() const {
  if (spec_.L > 10) throw ResourceLimit("dense chain gates are limited to L <= 10");
  const auto policy = PrecisionPolicy::hardware_double();
  CMatrix<double> a0(dim_, dim_, policy), a1(dim_, dim_, policy);
  State col(dim_);
  for (std::size_t c = 0; c < dim_; ++c) {
    std::fill(col.begin(), col.end(), std::complex<double>(0.0));
    col[c] = 1.0;
    apply_a0(col);
    for (std::size_t r = 0; r < dim_; ++r) a0(r, c) = Complex<double>(col[r].real(), col[r].imag());
    a1(c, c) = Complex<double>(phases_[c].real(), phases_[c].imag());
  }
  return {std::move(a0), std::move(a1)};
}

std::pair<CMatrix<double>, CMatrix<double>> chain_gates(const ChainSpec& spec) { return ChainGates(spec).dense(); }

drive::DriveSpec<double> chain_drive(const ChainSpec& spec) {
  auto [a0, a1] = chain_gates(spec);
  return drive::make_spec<double>(spec.m, std::move(a0), std::move(a1));
}

State product_state(unsigned L, std::complex<double> a0, std::complex<double> a1) {
  if (L < 1 || L > 24) throw InvalidArgument("product_state: L out of range");
  const double n = std::norm(a0) + std::norm(a1);
  if (std::abs(n - 1.0) > 1e-12) throw InvalidArgument("product_state: qubit state is not normalised");
  State psi{1.0};
  for (unsigned j = 0; j < L; ++j) {
    State next(psi.size() * 2);
    for (std::size_t i = 0; i < psi.size(); ++i) {
      next[2 * i] = psi[i] * a0;
      next[2 * i + 1] = psi[i] * a1;
    }
    psi = std::move(next);
  }
  return psi;
}

State random_product_state(unsigned L, std::mt19937_64& rng) {
  const auto v = haar::random_state(2, rng);
  std::complex<double> a0(v(0, 0).re, v(0, 0).im), a1(v(1, 0).re, v(1, 0).im);
  const double n = std::sqrt(std::norm(a0) + std::norm(a1));
  return product_state(L, a0 / n, a1 / n);
}

double state_norm(const State& psi) {
  double s = 0.0;
  for (const auto& a : psi) s += std::norm(a);
  return std::sqrt(s);
}

}  // namespace chse::manybody

#include <cmath>

#include "doctest.h"
#include "frozen.hpp"
#include "helpers.hpp"

using namespace chse;
using testing::dbl;
using testing::mat;

TEST_SUITE("bigmat") {
  TEST_CASE("BigFloat constants at 200 bits match the frozen values") {
    const auto p = PrecisionPolicy::big_float(200);
    PolicyScope scope(p);
    const BigFloat two(2.0);
    CHECK(abs(sqrt(two) - BigFloat(std::string(frozen::kSqrt2))) < BigFloat::pow2(-160));
    CHECK(abs(BigFloat::pi() - BigFloat(std::string(frozen::kPi))) < BigFloat::pow2(-160));
    CHECK(RealTraits<BigFloat>::to_decimal(sqrt(two), 30).substr(0, 30) == std::string(frozen::kSqrt2).substr(0, 30));
  }

  TEST_CASE("precision policy rejects fewer than 53 bits") {
    CHECK_THROWS_AS(PrecisionPolicy::big_float(32), InvalidArgument);
    CHECK(PrecisionPolicy::big_float(106).is_big());
  }

  TEST_CASE("swap keeps full precision") {
    const auto p = PrecisionPolicy::big_float(256);
    PolicyScope scope(p);
    Complex<BigFloat> x(BigFloat(1.0), BigFloat(2.0)), y(BigFloat(3.0), BigFloat(4.0));
    std::swap(x, y);
    CHECK(x.re == BigFloat(3.0));
    CHECK(y.im == BigFloat(2.0));
    BigFloat third = BigFloat(1.0) / BigFloat(3.0);
    BigFloat moved(std::move(third));
    third = BigFloat(2.0) / BigFloat(3.0);
    CHECK(abs(third * BigFloat(3.0) - BigFloat(2.0)) < BigFloat::pow2(-250));
    // determinant pivots by swapping rows
    const auto m = CMatrix<BigFloat>::from_values(2, 2, std::vector<std::complex<double>>{{0.1, 0.2}, 0.5, {0.9, -0.3}, 0.25}, p);
    const auto det = determinant(m);
    CHECK(abs(det.re - (BigFloat(0.1) * BigFloat(0.25) - BigFloat(0.9) * BigFloat(0.5))) < BigFloat::pow2(-240));
  }

  TEST_CASE("kron") {
    CHECK(max_abs_diff(kron(CMatrix<double>::identity(2, dbl()), CMatrix<double>::identity(2, dbl())),
                       CMatrix<double>::identity(4, dbl())) == 0.0);
    const auto a = mat(2, 2, {1, 0, 0, 2});
    const auto b = mat(2, 2, {3, 0, 0, 4});
    CHECK(max_abs_diff(kron(a, b), mat(4, 4, {3, 0, 0, 0, 0, 4, 0, 0, 0, 0, 6, 0, 0, 0, 0, 8})) == 0.0);
  }

  TEST_CASE("kron(X, X) in vec form against explicit 4x4 enumeration") {
    // vec(X ρ X) = (Xᵀ ⊗ X) vec ρ; check entry by entry for every basis ρ = |i⟩⟨j|.
    const auto x = pauli_x<double>(dbl());
    const auto xx = kron(x.transpose(), x);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        CMatrix<double> e(2, 2, dbl());
        e(i, j) = 1.0;
        const auto lhs = vec(CMatrix<double>(x * e * x));
        const auto rhs = xx * vec(e);
        CHECK(max_abs_diff(lhs, rhs) == 0.0);
        // X|i⟩⟨j|X = |1-i⟩⟨1-j|
        CMatrix<double> f(2, 2, dbl());
        f(1 - i, 1 - j) = 1.0;
        CHECK(max_abs_diff(unvec(rhs, 2), f) == 0.0);
      }
    // SWAP = (I + XX + YY + ZZ)/2
    CMatrix<double> swap = CMatrix<double>::identity(4, dbl()) + kron(x, x) + kron(pauli_y<double>(dbl()), pauli_y<double>(dbl())) +
                           kron(pauli_z<double>(dbl()), pauli_z<double>(dbl()));
    swap *= 0.5;
    CHECK(max_abs_diff(swap, mat(4, 4, {1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1})) < 1e-15);
  }

  TEST_CASE("tensor_power") {
    const auto u = testing::random_matrix(2, 2, 3);
    CHECK(max_abs_diff(tensor_power(u, 1), u) == 0.0);
    CHECK(max_abs_diff(tensor_power(CMatrix<double>::identity(2, dbl()), 3), CMatrix<double>::identity(8, dbl())) == 0.0);
    CHECK(max_abs_diff(tensor_power(pauli_z<double>(dbl()), 2), mat(4, 4, {1, 0, 0, 0, 0, -1, 0, 0, 0, 0, -1, 0, 0, 0, 0, 1})) == 0.0);
    CHECK_THROWS_AS(tensor_power(u, 0), InvalidArgument);
  }

  TEST_CASE("partial_trace") {
    const auto rho = testing::random_density(2, 5);
    const auto sigma = testing::random_density(3, 6);
    CHECK(max_abs_diff(partial_trace(kron(rho, sigma), {2, 3}, {0}), rho) < 1e-14);
    CHECK(max_abs_diff(partial_trace(kron(rho, sigma), {2, 3}, {1}), sigma) < 1e-14);
    const double r = 1.0 / std::sqrt(2.0);
    const auto bell = testing::column({r, 0, 0, r});
    const auto proj = outer(bell, bell);
    auto half = CMatrix<double>::identity(2, dbl());
    half *= 0.5;
    CHECK(max_abs_diff(partial_trace(proj, {2, 2}, {0}), half) < 1e-15);
    const auto two = testing::random_density(4, 7);
    CHECK(partial_trace(two, {2, 2}, {1}).trace().re == doctest::Approx(1.0).epsilon(1e-14));
    // direct index sum oracle
    const auto red = partial_trace(two, {2, 2}, {0});
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b) {
        Complex<double> s = two(a * 2, b * 2) + two(a * 2 + 1, b * 2 + 1);
        CHECK(std::abs(red(a, b).re - s.re) < 1e-15);
        CHECK(std::abs(red(a, b).im - s.im) < 1e-15);
      }
    const auto all = partial_trace(two, {2, 2}, {});
    CHECK(all.rows() == 1);
    CHECK(all(0, 0).re == doctest::Approx(two.trace().re));
    CHECK_THROWS_AS(partial_trace(two, {2, 3}, {0}), DimensionError);
  }

  TEST_CASE("eig_hermitian examples") {
    const auto d = eig_hermitian(mat(3, 3, {3, 0, 0, 0, 1, 0, 0, 0, 2}));
    CHECK(d.values == std::vector<double>{1.0, 2.0, 3.0});
    const auto x = eig_hermitian(pauli_x<double>(dbl()));
    CHECK(x.values[0] == doctest::Approx(-1.0));
    CHECK(x.values[1] == doctest::Approx(1.0));
    CHECK_THROWS_AS(eig_hermitian(mat(2, 2, {0, 1, 0, 0})), NotHermitian);
  }

  CMatrix<double> oracle_matrix() {
    CMatrix<double> h(8, 8, dbl());
    for (int j = 0; j < 8; ++j) {
      h(j, j) = Complex<double>(((j % 4) * 2 - 3) / 2.0);
      for (int k = j + 1; k < 8; ++k) {
        const double re = ((3 * j + 5 * k) % 7 - 3) / 4.0;
        const double im = ((2 * j + k) % 5 - 2) / 3.0;
        h(j, k) = Complex<double>(re, im);
        h(k, j) = Complex<double>(re, -im);
      }
    }
    return h;
  }

  TEST_CASE("8x8 eigenvalues match characteristic-polynomial roots") {
    const auto h = oracle_matrix();
    const auto eigen = eig_hermitian(h, false);
    const auto jacobi = eig_hermitian_jacobi(h, hermitian_tolerance(h), true);
    for (int i = 0; i < 8; ++i) {
      CHECK(std::abs(eigen.values[i] - frozen::kCharpolyRoots[i]) < 1e-10);
      CHECK(std::abs(jacobi.values[i] - frozen::kCharpolyRoots[i]) < 1e-10);
    }
    const auto p = PrecisionPolicy::big_float(128);
    const auto hb = convert<BigFloat>(h, p);
    const auto big = eig_hermitian(hb, true);
    for (int i = 0; i < 8; ++i) CHECK(std::abs(big.values[i].to_double() - frozen::kCharpolyRoots[i]) < 1e-15);
  }

  TEST_CASE("eig reconstruction within 1e3 ulp") {
    for (unsigned bits : {53u, 106u, 256u}) {
      const auto p = bits == 53 ? dbl() : PrecisionPolicy::big_float(bits);
      if (bits == 53) {
        const auto h = testing::random_hermitian(12, 11);
        const auto es = eig_hermitian(h);
        CMatrix<double> lam(12, 12, dbl());
        for (int i = 0; i < 12; ++i) lam(i, i) = Complex<double>(es.values[i]);
        CHECK(max_abs_diff(es.vectors * lam * es.vectors.adjoint(), h) <= 1e3 * p.ulp() * 4);
      } else {
        PolicyScope scope(p);
        const auto h = testing::random_hermitian<BigFloat>(12, 11, p);
        const auto es = eig_hermitian(h);
        CMatrix<BigFloat> lam(12, 12, p);
        for (int i = 0; i < 12; ++i) lam(i, i) = Complex<BigFloat>(es.values[i]);
        const CMatrix<BigFloat> diff = es.vectors * lam * es.vectors.adjoint() - h;
        CHECK(diff.max_abs() <= BigFloat(1e3) * RealTraits<BigFloat>::ulp(p) * BigFloat(4.0));
      }
    }
  }

  TEST_CASE("trace_norm and operator_norm") {
    CHECK(trace_norm(mat(2, 2, {1, 0, 0, -1})) == doctest::Approx(2.0));
    CHECK(trace_norm(mat(2, 2, {0.5, 0, 0, -0.5})) == doctest::Approx(1.0));
    CHECK(trace_norm(testing::random_density(5, 9)) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(operator_norm(CMatrix<double>::identity(4, dbl())) == doctest::Approx(1.0));
    auto x2 = pauli_x<double>(dbl());
    x2 *= 2.0;
    CHECK(operator_norm(x2) == doctest::Approx(2.0));
    const auto u = expm_hermitian(testing::random_hermitian(4, 17), 1.0);
    CHECK(operator_norm(CMatrix<double>(CMatrix<double>::identity(4, dbl()) - u * u.adjoint())) < 1e-14);
    // general path via singular values
    const auto a = mat(2, 2, {0, 3, 0, 0});
    CHECK(trace_norm(a) == doctest::Approx(3.0));
    CHECK_THROWS_AS(trace_norm(testing::random_matrix(2, 3, 1)), DimensionError);
  }

  TEST_CASE("expm_hermitian") {
    const auto h = testing::random_hermitian(4, 13);
    CHECK(max_abs_diff(expm_hermitian(h, 0.0), CMatrix<double>::identity(4, dbl())) < 1e-14);
    const auto z = expm_hermitian(pauli_z<double>(dbl()), M_PI / 2);
    CHECK(max_abs_diff(z, mat(2, 2, {{0, -1}, 0, 0, {0, 1}})) < 1e-15);
    // power series oracle, 20 terms
    const double theta = 0.7;
    const auto x = pauli_x<double>(dbl());
    CMatrix<double> series = CMatrix<double>::identity(2, dbl());
    CMatrix<double> term = CMatrix<double>::identity(2, dbl());
    for (int n = 1; n < 20; ++n) {
      term = term * x;
      term *= Complex<double>(0.0, -theta / n);
      series += term;
    }
    CHECK(max_abs_diff(expm_hermitian(x, theta), series) < 1e-15);
    CHECK(unitarity_error(expm_hermitian(h, 1.3)) < 1e3 * dbl().ulp());
    // group property
    CHECK(max_abs_diff(expm_hermitian(h, 0.4) * expm_hermitian(h, 0.9), expm_hermitian(h, 1.3)) < 1e-13);
    CHECK_THROWS_AS(expm_hermitian(mat(2, 2, {0, 1, 0, 0}), 1.0), NotHermitian);
  }

  TEST_CASE("vec and unvec") {
    CHECK(max_abs_diff(vec(CMatrix<double>::identity(2, dbl())), testing::column({1, 0, 0, 1})) == 0.0);
    const auto rho = testing::random_density(3, 21);
    CHECK(max_abs_diff(unvec(vec(rho), 3), rho) == 0.0);
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto a = testing::random_matrix(3, 3, 100 + s);
      const auto x = testing::random_matrix(3, 3, 200 + s);
      const auto b = testing::random_matrix(3, 3, 300 + s);
      CHECK(max_abs_diff(vec(CMatrix<double>(a * x * b)), kron(b.transpose(), a) * vec(x)) < 1e-13);
    }
    CHECK_THROWS_AS(unvec(testing::column({1, 2, 3}), 2), DimensionError);
  }

  TEST_CASE("mixing policies is an error") {
    const auto a = CMatrix<double>::identity(2, dbl());
    const auto b = CMatrix<BigFloat>::identity(2, PrecisionPolicy::big_float(128));
    const auto c = CMatrix<BigFloat>::identity(2, PrecisionPolicy::big_float(256));
    CHECK_THROWS_AS(b * c, PolicyMismatch);
    CHECK_THROWS_AS(kron(b, c), PolicyMismatch);
    CHECK(max_abs_diff(convert<double>(b, dbl()), a) == 0.0);
  }
}

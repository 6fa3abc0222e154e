#include <catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <numbers>
#include <random>

#include "mdframe/error.hpp"
#include "mdframe/linalg.hpp"

using namespace mdframe;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

LaurentPoly random_poly(std::mt19937_64& rng, int lo, int hi) {
  std::normal_distribution<double> g;
  std::vector<Complex> c;
  for (int d = lo; d <= hi; ++d) c.emplace_back(g(rng), g(rng));
  return LaurentPoly::from_coeffs(lo, std::move(c));
}

LaurentMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  LaurentMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = random_poly(rng, -1, 1);
  return m;
}

CMatrix random_hermitian(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  CMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    h(i, i) = g(rng);
    for (std::size_t j = i + 1; j < n; ++j) {
      h(i, j) = Complex(g(rng), g(rng));
      h(j, i) = std::conj(h(i, j));
    }
  }
  return h;
}

Eigen::MatrixXcd to_eigen(const CMatrix& m) {
  Eigen::MatrixXcd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

// Unitary from the QR factorization of a random complex matrix.
CMatrix random_unitary(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  const Eigen::MatrixXcd q = Eigen::HouseholderQR<Eigen::MatrixXcd>(a).householderQ();
  CMatrix u(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) u(i, j) = q(i, j);
  return u;
}

}  // namespace

TEST_CASE("Laurent arithmetic") {
  const LaurentPoly z = LaurentPoly::monomial(1);
  CHECK(coeff_distance(z.conj_reflect(), LaurentPoly::monomial(-1)) == 0.0);
  const LaurentPoly one(1.0);
  CHECK(coeff_distance((one + z) * (one - z), one - LaurentPoly::monomial(2)) == 0.0);
  CHECK((z - z).is_zero());
  CHECK(coeff_distance(z.shifted(-3), LaurentPoly::monomial(-2)) == 0.0);

  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    const LaurentPoly p = random_poly(rng, -3, 4);
    const LaurentPoly s = p * p.conj_reflect();
    CHECK(coeff_distance(s.conj_reflect(), s) < 1e-13);
    CHECK(coeff_distance(p.conj_reflect().conj_reflect(), p) == 0.0);
  }
}

TEST_CASE("pruning drops rounding dust relative to the operands") {
  // stored coefficients are kept however small; only exact zeros are trimmed
  const LaurentPoly p = LaurentPoly::from_coeffs(-2, {0.0, 1e-30, 1.0, 0.0});
  CHECK(p.low_degree() == -1);
  CHECK(p.high_degree() == 0);
  CHECK_FALSE(LaurentPoly::from_coeffs(3, {1e-20}).is_zero());
  // 1e6 (0.1 + 0.2) - 3e5 leaves rounding dust, which is dropped
  const LaurentPoly a = LaurentPoly(1e6) * (LaurentPoly(0.1) + LaurentPoly(0.2));
  CHECK((a - LaurentPoly(3e5)).is_zero());
  const LaurentPoly tiny = LaurentPoly::monomial(4, 1e-20) * LaurentPoly::monomial(1, 1e-20);
  CHECK(tiny.coeff(5) == Complex(1e-40));
  const LaurentPoly mixed = LaurentPoly::from_coeffs(0, {1.0, 1e-18}) * LaurentPoly(1.0);
  CHECK(mixed.high_degree() == 0);
}

TEST_CASE("eval_at") {
  const LaurentPoly z = LaurentPoly::monomial(1);
  CHECK_THAT(std::abs(z(0.0) - 1.0), WithinAbs(0.0, 1e-15));
  CHECK_THAT(std::abs(z(0.5) + 1.0), WithinAbs(0.0, 1e-15));
  const LaurentPoly p = LaurentPoly(1.0) + z;
  CHECK_THAT(std::abs(p(0.25) - Complex(1.0, 1.0)), WithinAbs(0.0, 1e-15));
  const LaurentPoly zinv = LaurentPoly::monomial(-2, 3.0);
  CHECK_THAT(std::abs(zinv(0.125) - 3.0 * std::polar(1.0, -0.5 * std::numbers::pi)), WithinAbs(0.0, 1e-14));
}

TEST_CASE("circle Parseval matches quadrature") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    const LaurentPoly p = random_poly(rng, -6, 9);
    double quad = 0.0;
    for (int k = 0; k < 512; ++k) quad += std::norm(p(k / 512.0));
    quad /= 512.0;
    CHECK_THAT(quad, WithinRel(p.sum_sq(), 1e-10));
  }
}

TEST_CASE("matrix adjoint reverses products") {
  std::mt19937_64 rng(3);
  const LaurentMatrix a = random_matrix(rng, 3, 2);
  const LaurentMatrix b = random_matrix(rng, 2, 4);
  CHECK(coeff_distance((a * b).adjoint(), b.adjoint() * a.adjoint()) < 1e-13);
  const CMatrix ae = a.eval_at(0.3);
  const CMatrix ad = a.adjoint().eval_at(0.3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(std::abs(ad(j, i) - std::conj(ae(i, j))) < 1e-13);
}

TEST_CASE("hermitian_eigenvalues") {
  const auto id = hermitian_eigenvalues(CMatrix::identity(3));
  CHECK(id.values == std::vector<double>{1.0, 1.0, 1.0});

  CMatrix pauli(2, 2);
  pauli(0, 1) = 1.0;
  pauli(1, 0) = 1.0;
  const auto px = hermitian_eigenvalues(pauli);
  CHECK_THAT(px.values[0], WithinAbs(-1.0, 1e-15));
  CHECK_THAT(px.values[1], WithinAbs(1.0, 1e-15));

  std::mt19937_64 rng(17);
  CMatrix d(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = 5.0;
  for (int t = 0; t < 10; ++t) {
    const CMatrix u = random_unitary(rng, 2);
    const auto ev = hermitian_eigenvalues(u * d * u.adjoint());
    CHECK_THAT(ev.values[0], WithinAbs(2.0, 1e-12));
    CHECK_THAT(ev.values[1], WithinAbs(5.0, 1e-12));
  }

  for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 16u}) {
    const CMatrix h = random_hermitian(rng, n);
    const auto ev = hermitian_eigenvalues(h);
    CHECK(ev.converged);
    const Eigen::VectorXd ref = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(to_eigen(h)).eigenvalues();
    for (std::size_t i = 0; i < n; ++i) CHECK_THAT(ev.values[i], WithinAbs(ref(static_cast<Eigen::Index>(i)), 1e-12));
    Complex trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += h(i, i);
    double sum = 0.0, prod = 1.0;
    for (double v : ev.values) {
      sum += v;
      prod *= v;
    }
    CHECK_THAT(sum, WithinAbs(trace.real(), 1e-10 * (1.0 + std::abs(trace))));
    const double det = to_eigen(h).determinant().real();
    CHECK_THAT(prod, WithinRel(det, 1e-10));
  }
}

TEST_CASE("hermitian_eigensystem vectors diagonalize") {
  std::mt19937_64 rng(23);
  const CMatrix h = random_hermitian(rng, 6);
  const auto es = hermitian_eigensystem(h);
  const CMatrix v = es.vectors;
  const CMatrix lam = v.adjoint() * h * v;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      CHECK(std::abs(lam(i, j) - (i == j ? es.values[i] : 0.0)) < 1e-12);
}

TEST_CASE("singular_values agree with Eigen") {
  std::mt19937_64 rng(29);
  for (auto [r, c] : {std::pair{3, 2}, std::pair{5, 3}, std::pair{4, 4}}) {
    const LaurentMatrix m = random_matrix(rng, static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    const CMatrix x = m.eval_at(0.17);
    const auto sv = singular_values(x);
    const Eigen::VectorXd ref = Eigen::JacobiSVD<Eigen::MatrixXcd>(to_eigen(x)).singularValues();
    REQUIRE(sv.size() == static_cast<std::size_t>(ref.size()));
    for (std::size_t i = 0; i < sv.size(); ++i) CHECK_THAT(sv[i], WithinRel(ref(static_cast<Eigen::Index>(i)), 1e-12));
  }
  CMatrix rank1(3, 2);
  rank1(0, 0) = 1.0;
  rank1(0, 1) = 2.0;
  rank1(1, 0) = 3.0;
  rank1(1, 1) = 6.0;
  const auto sv = singular_values(rank1);
  CHECK(sv[1] < 1e-15 * sv[0]);
}

TEST_CASE("laurent_det") {
  CHECK(coeff_distance(laurent_det(LaurentMatrix::identity(2)), LaurentPoly(1.0)) == 0.0);
  LaurentMatrix m(2, 2);
  m(0, 0) = LaurentPoly::monomial(1);
  m(1, 1) = LaurentPoly::monomial(-1);
  CHECK(coeff_distance(laurent_det(m), LaurentPoly(1.0)) == 0.0);
  LaurentMatrix s(2, 2);
  s(0, 0) = Complex(1.0);
  s(0, 1) = LaurentPoly::monomial(1);
  s(1, 0) = LaurentPoly::monomial(-1);
  s(1, 1) = Complex(1.0);
  CHECK(laurent_det(s).is_zero());

  std::mt19937_64 rng(31);
  for (std::size_t n = 1; n <= 3; ++n) {
    const LaurentMatrix a = random_matrix(rng, n, n);
    const LaurentMatrix b = random_matrix(rng, n, n);
    const LaurentPoly lhs = laurent_det(a * b);
    const LaurentPoly rhs = laurent_det(a) * laurent_det(b);
    CHECK(coeff_distance(lhs, rhs) < 1e-12 * std::max(1.0, rhs.max_abs_coeff()));
  }
  const LaurentMatrix big = random_matrix(rng, 4, 4);
  const Complex ref = to_eigen(big.eval_at(0.41)).determinant();
  CHECK(std::abs(laurent_det(big)(0.41) - ref) < 1e-11 * std::abs(ref));
  try {
    laurent_det(LaurentMatrix::identity(7));
    FAIL("expected TooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooLarge);
  }
}

TEST_CASE("pinv_at") {
  const auto id = pinv_at(CMatrix::identity(2));
  CHECK((id.inverse - CMatrix::identity(2)).frobenius_norm() < 1e-15);
  CMatrix two = CMatrix::identity(2);
  two(0, 0) = 2.0;
  two(1, 1) = 2.0;
  const auto quarter = pinv_at(two);
  CHECK(std::abs(quarter.inverse(0, 0) - 0.25) < 1e-15);
  CHECK(std::abs(quarter.inverse(1, 1) - 0.25) < 1e-15);
  CHECK(std::abs(quarter.inverse(0, 1)) < 1e-15);
  CMatrix col(2, 1);
  col(0, 0) = 1.0;
  const auto scalar = pinv_at(col);
  CHECK(std::abs(scalar.inverse(0, 0) - 1.0) < 1e-15);
  CMatrix singular(2, 2);
  singular(0, 0) = 1.0;
  try {
    pinv_at(singular);
    FAIL("expected Singular");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Singular);
  }
}

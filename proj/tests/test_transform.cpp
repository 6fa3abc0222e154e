#include <catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "mdframe/lattice.hpp"
#include "mdframe/transform.hpp"

using namespace mdframe;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Pointwise evaluation of a step function.
Complex value_at(const StepFunction& f, double x) {
  const double idx = std::log(x) / std::log(f.params().delta()) * f.n();
  return f.at(static_cast<CellIndex>(std::floor(idx + 1e-9)));
}

Complex lambda_at(std::int64_t m, double x, const MDParams& prm) {
  const double b = prm.b();
  double y = x / std::pow(b, std::floor(std::log(x) / std::log(b) + 1e-12));
  return std::polar(1.0 / std::sqrt(b - 1.0), 2.0 * std::numbers::pi * static_cast<double>(m) * y / (b - 1.0));
}

// Theta_beta g(x, xi) by its defining series, g given pointwise.
template <typename G>
Complex theta_at(const G& g, double x, double xi, const MDParams& prm, int l_range) {
  Complex s = 0.0;
  for (int l = -l_range; l <= l_range; ++l)
    s += std::pow(prm.beta(), 0.5 * l) * g(std::pow(prm.beta(), l) * x) * std::polar(1.0, -2.0 * std::numbers::pi * l * xi);
  return s;
}

}  // namespace

TEST_CASE("theta of indicators") {
  const MDParams prm = derive_params(2.0, 1, 2);
  const int n = 2;
  const CellIndex period = 2 * n;  // pqN
  const ThetaField t0 = theta(StepFunction::indicator(prm, n, 0, period));
  for (const auto& c : t0.cells) CHECK(coeff_distance(c, LaurentPoly(1.0)) == 0.0);
  const ThetaField t1 = theta(StepFunction::indicator(prm, n, period, 2 * period));
  for (const auto& c : t1.cells)
    CHECK(coeff_distance(c, LaurentPoly::monomial(-1, std::sqrt(prm.beta()))) < 1e-15);

  const StepFunction back = theta_inverse(t1);
  CHECK(back.i_min() == period);
  CHECK(back.i_max() == 2 * period);
  for (CellIndex i = period; i < 2 * period; ++i) CHECK_THAT(std::abs(back.at(i) - 1.0), WithinAbs(0.0, 1e-15));
}

TEST_CASE("theta and gamma are unitary and invertible") {
  std::mt19937_64 rng(10);
  for (auto [p, q] : {std::pair{1, 1}, std::pair{1, 2}, std::pair{2, 3}, std::pair{3, 4}}) {
    const MDParams prm = derive_params(1.4, p, q);
    const int n = 3;
    const StepFunction f = random_window(prm, n, -17, 41, rng);
    CHECK_THAT(field_norm_sq(theta(f)), WithinRel(f.norm_sq(), 1e-12));
    CHECK_THAT(field_norm_sq(gamma(f)), WithinRel(f.norm_sq(), 1e-12));
    CHECK(max_cell_error(theta_inverse(theta(f)), f) < 1e-13);
    const StepFunction psi = random_window(prm, n, -5, 29, rng);
    CHECK(max_cell_error(window_from_matrix(transform_matrix(psi)), psi) < 1e-13);
  }
}

TEST_CASE("gamma bookkeeping") {
  // p = 1: gamma is theta on [1, b) = [1, beta)
  const MDParams p1 = derive_params(1.5, 1, 3);
  std::mt19937_64 rng(12);
  const StepFunction f = random_window(p1, 2, -6, 20, rng);
  const GammaField g = gamma(f);
  const ThetaField t = theta(f);
  REQUIRE(g.cells.size() == t.cells.size());
  for (std::size_t i = 0; i < g.cells.size(); ++i) CHECK(coeff_distance(g.cells[i][0], t.cells[i]) == 0.0);

  // f = chi_[1, delta), p = 2, q = 3: component s = 1 vanishes on [1, delta)
  const MDParams p23 = derive_params(2.0, 2, 3);
  const StepFunction chi = StepFunction::indicator(p23, 1, 0, 1);
  const GammaField gc = gamma(chi);
  CHECK(gc.cells[0][1].is_zero());
  CHECK(coeff_distance(gc.cells[0][0], LaurentPoly(1.0)) == 0.0);
}

TEST_CASE("transform_matrix of indicators") {
  const MDParams p11 = derive_params(2.0, 1, 1);
  const TransformMatrix t11 = transform_matrix(StepFunction::indicator(p11, 3, 0, 3));
  REQUIRE(t11.cells.size() == 3);
  for (const auto& c : t11.cells) CHECK(coeff_distance(c(0, 0), LaurentPoly(1.0)) == 0.0);

  const MDParams p12 = derive_params(2.0, 1, 2);
  const TransformMatrix t12 = transform_matrix(StepFunction::indicator(p12, 2, 0, 2));
  for (const auto& c : t12.cells) {
    REQUIRE(c.rows() == 2);
    REQUIRE(c.cols() == 1);
    CHECK(coeff_distance(c(0, 0), LaurentPoly(1.0)) == 0.0);
    CHECK(c(1, 0).is_zero());
  }
}

TEST_CASE("window_from_matrix coefficient bookkeeping") {
  const MDParams prm = derive_params(1.5, 2, 3);
  const int n = 2;
  for (int r = 0; r < 3; ++r)
    for (int s = 0; s < 2; ++s) {
      TransformMatrix t{prm, n, std::vector<LaurentMatrix>(n, LaurentMatrix(3, 2))};
      const int k = 2 * r + 3 * s;
      t.cells[1](static_cast<std::size_t>(r), static_cast<std::size_t>(s)) =
          LaurentPoly::monomial(-1, prm.sqrt_delta_pow(6 + k));  // z^{-1} a^{r/2} b^{s/2} beta^{1/2}
      const StepFunction psi = window_from_matrix(t);
      const CellIndex target = 1 + k * n + 6 * n;  // beta a^r b^s cell_1
      CHECK(psi.i_min() == target);
      CHECK(psi.i_max() == target + 1);
      CHECK_THAT(std::abs(psi.at(target) - 1.0), WithinAbs(0.0, 1e-14));
    }
}

TEST_CASE("quasi-periodicity") {
  std::mt19937_64 rng(13);
  for (auto [p, q] : {std::pair{1, 1}, std::pair{2, 3}, std::pair{3, 4}}) {
    const MDParams prm = derive_params(1.3, p, q);
    const StepFunction f = random_window(prm, 2, -20, 35, rng);
    CHECK(check_quasi_periodicity(f, 0, 0) == 0.0);
    for (int j = -4; j <= 4; ++j)
      for (int m = -4; m <= 4; ++m) CHECK(check_quasi_periodicity(f, j, m) < 1e-13);
  }
}

TEST_CASE("recurrences") {
  std::mt19937_64 rng(14);
  const MDParams p23 = derive_params(1.6, 2, 3);
  const TransformMatrix t = transform_matrix(random_window(p23, 3, -10, 40, rng));
  const auto rr = check_recurrences(t);
  CHECK(rr.dilation_by_a < 1e-12);
  REQUIRE(rr.dilation_by_delta.has_value());
  CHECK(*rr.dilation_by_delta < 1e-12);

  const MDParams p12 = derive_params(1.6, 1, 2);
  const auto r12 = check_recurrences(transform_matrix(random_window(p12, 3, -3, 12, rng)));
  CHECK(r12.dilation_by_a < 1e-12);
  CHECK_FALSE(r12.dilation_by_delta.has_value());

  // a deliberately wrong L_q (identity) breaks the delta step
  const LaurentMatrix psi0 = t.cells[0];
  const auto shifted = extend_matrix(t, t.n);
  CHECK(coeff_distance(shifted[0], p23.sqrt_delta_pow(-1) * psi0) > 1e-3);
}

TEST_CASE("extend_matrix") {
  std::mt19937_64 rng(15);
  const MDParams prm = derive_params(1.5, 2, 3);
  const int n = 2;
  const TransformMatrix t = transform_matrix(random_window(prm, n, -8, 30, rng));
  const auto same = extend_matrix(t, 0);
  for (int i = 0; i < n; ++i) CHECK(coeff_distance(same[static_cast<std::size_t>(i)], t.cells[static_cast<std::size_t>(i)]) == 0.0);

  const auto step = extend_matrix(t, n);
  const LaurentMatrix lq = structural_matrix(prm, StructuralKind::Lq);
  const LaurentMatrix rp = structural_matrix(prm, StructuralKind::Rp);
  for (int i = 0; i < n; ++i) {
    const LaurentMatrix rhs = prm.sqrt_delta_pow(-1) * (lq * t.cells[static_cast<std::size_t>(i)] * rp);
    CHECK(coeff_distance(step[static_cast<std::size_t>(i)], rhs) < 1e-12);
  }

  // one full beta: z beta^{-1/2} Psi
  const auto period = extend_matrix(t, 6 * n);
  LaurentMatrix z = LaurentMatrix::identity(3);
  for (std::size_t d = 0; d < 3; ++d) z(d, d) = LaurentPoly::monomial(1);
  for (int i = 0; i < n; ++i) {
    const LaurentMatrix rhs = prm.sqrt_delta_pow(-6) * (z * t.cells[static_cast<std::size_t>(i)]);
    CHECK(coeff_distance(period[static_cast<std::size_t>(i)], rhs) < 1e-12);
  }
}

TEST_CASE("factorized analysis identity at sampled points") {
  // Gamma(Lambda_m D_{a^{jq+r}} f)(x, xi) = Lambda_m(x) e^{2 pi i j xi} (a^{r/2} b^{s/2} Theta f(a^r b^s x, xi))_s
  std::mt19937_64 rng(16);
  const MDParams prm = derive_params(1.5, 2, 3);
  const int n = 2;
  const StepFunction f = random_window(prm, n, -6, 18, rng);
  auto f_at = [&](double y) { return value_at(f, y); };
  double worst = 0.0;
  for (int trial = 0; trial < 12; ++trial) {
    const double x = std::pow(prm.b(), uniform01(rng) * 0.999 + 0.0005);
    const double xi = uniform01(rng);
    const int m = static_cast<int>(rng() % 7) - 3;
    const int j = static_cast<int>(rng() % 3) - 1;
    const int r = static_cast<int>(rng() % 3);
    const int big = j * prm.q() + r;
    auto g = [&](double y) {
      return lambda_at(m, y, prm) * std::pow(prm.a(), 0.5 * big) * value_at(f, std::pow(prm.a(), big) * y);
    };
    for (int s = 0; s < prm.p(); ++s) {
      const Complex lhs = std::pow(prm.b(), 0.5 * s) * theta_at(g, std::pow(prm.b(), s) * x, xi, prm, 6);
      const double shift = std::pow(prm.a(), r) * std::pow(prm.b(), s);
      const Complex rhs = lambda_at(m, x, prm) * std::polar(1.0, 2.0 * std::numbers::pi * j * xi) *
                          std::sqrt(shift) * theta_at(f_at, shift * x, xi, prm, 6);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  CHECK(worst < 1e-10);
}

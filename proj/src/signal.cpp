#include "mdframe/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "mdframe/error.hpp"

namespace mdframe {

double GeoGrid::point(CellIndex i) const {
  return std::exp(std::log(params.delta()) * static_cast<double>(i) / n);
}

double GeoGrid::width(CellIndex i) const {
  const double log_step = std::log(params.delta()) / n;
  return point(i) * std::expm1(log_step);
}

StepFunction::StepFunction(GeoGrid grid, std::vector<Complex> values) : grid_(grid), values_(std::move(values)) {
  if (grid_.n < 1) throw Error(ErrorCode::InvalidArgument, "N must be positive");
  if (grid_.i_max < grid_.i_min) throw Error(ErrorCode::InvalidArgument, "empty cell range must satisfy i_min <= i_max");
  if (static_cast<CellIndex>(values_.size()) != grid_.size())
    throw Error(ErrorCode::InvalidArgument, "value count does not match the cell range");
}

StepFunction::StepFunction(GeoGrid grid) : StepFunction(grid, std::vector<Complex>(static_cast<std::size_t>(std::max<CellIndex>(grid.size(), 0)))) {}

StepFunction StepFunction::indicator(const MDParams& params, int n, CellIndex lo, CellIndex hi) {
  return StepFunction(GeoGrid{params, n, lo, hi}, std::vector<Complex>(static_cast<std::size_t>(hi - lo), 1.0));
}

Complex StepFunction::at(CellIndex i) const noexcept {
  if (i < grid_.i_min || i >= grid_.i_max) return 0.0;
  return values_[static_cast<std::size_t>(i - grid_.i_min)];
}

double StepFunction::norm_sq() const {
  double s = 0.0;
  for (CellIndex i = grid_.i_min; i < grid_.i_max; ++i) s += std::norm(at(i)) * grid_.width(i);
  return s;
}

double StepFunction::norm() const { return std::sqrt(norm_sq()); }

StepFunction StepFunction::operator*(Complex s) const {
  StepFunction out = *this;
  for (auto& v : out.values_) v *= s;
  return out;
}

StepFunction StepFunction::operator-(const StepFunction& rhs) const {
  if (!(params() == rhs.params()) || n() != rhs.n())
    throw Error(ErrorCode::GridMisaligned, "difference of functions on different grids");
  const CellIndex lo = std::min(i_min(), rhs.i_min());
  const CellIndex hi = std::max(i_max(), rhs.i_max());
  std::vector<Complex> v(static_cast<std::size_t>(hi - lo));
  for (CellIndex i = lo; i < hi; ++i) v[static_cast<std::size_t>(i - lo)] = at(i) - rhs.at(i);
  return StepFunction(GeoGrid{params(), n(), lo, hi}, std::move(v));
}

StepFunction refine(const StepFunction& f, int factor) {
  if (factor < 1) throw Error(ErrorCode::InvalidArgument, "refinement factor must be positive");
  if (factor == 1) return f;
  GeoGrid g = f.grid();
  g.n *= factor;
  g.i_min *= factor;
  g.i_max *= factor;
  std::vector<Complex> v;
  v.reserve(static_cast<std::size_t>(g.size()));
  for (Complex x : f.values()) v.insert(v.end(), static_cast<std::size_t>(factor), x);
  return StepFunction(g, std::move(v));
}

std::pair<StepFunction, StepFunction> common_grid(const StepFunction& f, const StepFunction& g) {
  if (!(f.params() == g.params())) throw Error(ErrorCode::GridMisaligned, "functions use different parameters");
  const int n = std::lcm(f.n(), g.n());
  return {refine(f, n / f.n()), refine(g, n / g.n())};
}

StepFunction dilate(const StepFunction& f, std::int64_t k) {
  GeoGrid g = f.grid();
  const CellIndex shift = k * g.n;
  g.i_min -= shift;
  g.i_max -= shift;
  return StepFunction(g, std::vector<Complex>(f.values().begin(), f.values().end())) * f.params().sqrt_delta_pow(k);
}

namespace {

// e^{-2 pi i t} with t reduced mod 1 first.
Complex unit_phase(double t) {
  const double frac = t - std::floor(t);
  return std::polar(1.0, -2.0 * std::numbers::pi * frac);
}

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

}  // namespace

Complex lambda_integral(std::int64_t m, CellIndex i, const GeoGrid& grid) {
  // Lambda_m is b-dilation periodic: fold cell i into [1, b) and scale by b^k.
  const CellIndex per_b = grid.cells_per_b();
  const std::int64_t k = floor_div(i, per_b);
  const CellIndex i0 = i - k * per_b;
  const double period = grid.params.b() - 1.0;
  const double scale = std::pow(grid.params.b(), static_cast<double>(k)) / std::sqrt(period);
  const double w = grid.width(i0);
  if (m == 0) return scale * w;
  const double y0 = grid.point(i0);
  const double mid = y0 + 0.5 * w;
  const double theta = 2.0 * std::numbers::pi * static_cast<double>(m) / period;
  // integral of e^{-i theta y} over [y0, y0 + w) = w sinc(theta w / 2) e^{-i theta mid}
  const double cycles = static_cast<double>(m) * (mid / period);
  return scale * w * sinc(0.5 * theta * w) * unit_phase(cycles);
}

Complex lambda_product_integral(std::int64_t m, std::int64_t m2, CellIndex i, const GeoGrid& grid) {
  // Lambda_m conj(Lambda_m2) = (b-1)^{-1/2} Lambda_{m-m2}
  return std::conj(lambda_integral(m - m2, i, grid)) / std::sqrt(grid.params.b() - 1.0);
}

Complex inner_product(const StepFunction& f, const StepFunction& g) {
  if (!(f.params() == g.params()) || f.n() != g.n())
    throw Error(ErrorCode::GridMisaligned, "inner product needs a common grid");
  const CellIndex lo = std::max(f.i_min(), g.i_min());
  const CellIndex hi = std::min(f.i_max(), g.i_max());
  Complex s = 0.0;
  for (CellIndex i = lo; i < hi; ++i) s += f.at(i) * std::conj(g.at(i)) * f.grid().width(i);
  return s;
}

Complex md_inner(const StepFunction& f, const StepFunction& psi, std::int64_t m, std::int64_t j) {
  if (!(f.params() == psi.params()) || f.n() != psi.n())
    throw Error(ErrorCode::GridMisaligned, "md_inner needs a common grid");
  const std::int64_t k = static_cast<std::int64_t>(f.params().p()) * j;
  const StepFunction g = dilate(psi, k);
  const CellIndex lo = std::max(f.i_min(), g.i_min());
  const CellIndex hi = std::min(f.i_max(), g.i_max());
  Complex s = 0.0;
  for (CellIndex i = lo; i < hi; ++i) {
    const Complex prod = f.at(i) * std::conj(g.at(i));
    if (prod == 0.0) continue;
    s += prod * lambda_integral(m, i, f.grid());
  }
  return s;
}

std::vector<std::int64_t> overlapping_dilations(const StepFunction& f, const StepFunction& psi) {
  // supp D_{a^j} psi = cells [psi.i_min - p j N, psi.i_max - p j N)
  std::vector<std::int64_t> out;
  if (f.grid().size() <= 0 || psi.grid().size() <= 0) return out;
  const std::int64_t step = static_cast<std::int64_t>(f.params().p()) * f.n();
  // overlap iff psi.i_min - step j < f.i_max and psi.i_max - step j > f.i_min
  const std::int64_t j_lo = floor_div(psi.i_min() - f.i_max(), step) + 1;
  const std::int64_t j_hi = -floor_div(f.i_min() - psi.i_max(), step) - 1;
  for (std::int64_t j = j_lo; j <= j_hi + 1; ++j) {
    const CellIndex lo = psi.i_min() - step * j, hi = psi.i_max() - step * j;
    if (lo < f.i_max() && hi > f.i_min()) out.push_back(j);
  }
  return out;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

StepFunction random_window(const MDParams& params, int n, CellIndex lo, CellIndex hi, std::mt19937_64& rng) {
  std::vector<Complex> v(static_cast<std::size_t>(hi - lo));
  for (auto& x : v) {
    const double radius = std::sqrt(uniform01(rng));
    const double angle = 2.0 * std::numbers::pi * uniform01(rng);
    x = std::polar(radius, angle);
  }
  return StepFunction(GeoGrid{params, n, lo, hi}, std::move(v));
}

}  // namespace mdframe

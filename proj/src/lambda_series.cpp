#include "mdframe/lambda_series.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "mdframe/error.hpp"

namespace mdframe {

namespace {

constexpr std::int64_t kDirectLimit = 1024;
constexpr double kAsymptoticReach = 64.0;  // required n |1 - u| before the tail series is used
constexpr int kTailTerms = 16;

using StirlingTable = std::array<std::array<double, kTailTerms + 1>, kTailTerms + 1>;

// S(n, k) * k!
const StirlingTable& stirling_factorial() {
  static const StirlingTable table = [] {
    StirlingTable s{};
    s[0][0] = 1.0;
    for (int n = 1; n <= kTailTerms; ++n)
      for (int k = 1; k <= n; ++k) s[n][k] = k * s[n - 1][k] + s[n - 1][k - 1];
    for (int n = 0; n <= kTailTerms; ++n) {
      double fact = 1.0;
      for (int k = 0; k <= n; ++k) {
        if (k > 0) fact *= k;
        s[n][k] *= fact;
      }
    }
    return s;
  }();
  return table;
}

double direct_kernel(double t, std::int64_t m_lo, std::int64_t m_hi) {
  // 2 sum_{m = m_lo}^{m_hi} cos(2 pi m t) / m^2, summed from the small terms up
  double s = 0.0;
  for (std::int64_t m = m_hi; m >= m_lo; --m) {
    const double md = static_cast<double>(m);
    const double cycles = md * t - std::floor(md * t);
    s += std::cos(2.0 * std::numbers::pi * cycles) / (md * md);
  }
  return 2.0 * s;
}

// sum_{m >= n} 1/m^2 for large n
double trigamma_tail(double n) {
  const double x = 1.0 / n;
  const double x2 = x * x;
  return x * (1.0 + x * (0.5 + x * (1.0 / 6.0 + x2 * (-1.0 / 30.0 + x2 * (1.0 / 42.0 + x2 * (-1.0 / 30.0))))));
}

// Re sum_{m >= n} u^m / m^2 with u = e^{2 pi i t}, u != 1 and n |1 - u| large.
double oscillating_tail(double t, std::int64_t n) {
  const auto& sk = stirling_factorial();
  const Complex u = std::polar(1.0, 2.0 * std::numbers::pi * t);
  const Complex w = 1.0 / (1.0 - u);
  const double nd = static_cast<double>(n);

  // E_tau(u) = sum_k k^tau u^k (Abel sum) = sum_j S(tau, j) j! u^j w^{j+1}
  std::array<Complex, kTailTerms + 1> uw{};
  uw[0] = w;
  for (int j = 1; j <= kTailTerms; ++j) uw[j] = uw[j - 1] * u * w;

  Complex series = 0.0;
  double npow = nd * nd;
  double last = HUGE_VAL;
  for (int tau = 0; tau <= kTailTerms; ++tau) {
    Complex e = 0.0;
    for (int j = 0; j <= tau; ++j) e += sk[tau][j] * uw[j];
    const Complex term = ((tau % 2 == 0) ? 1.0 : -1.0) * (tau + 1) * e / npow;
    const double mag = std::abs(term);
    if (mag > last) break;  // asymptotic series started to diverge
    series += term;
    last = mag;
    if (mag < 1e-18 * std::abs(series)) break;
    npow *= nd;
  }
  const double cycles = nd * t - std::floor(nd * t);
  return (std::polar(1.0, 2.0 * std::numbers::pi * cycles) * series).real();
}

}  // namespace

double lambda_square_kernel(double t, std::int64_t m_max) {
  if (m_max <= 0) return 0.0;
  t -= std::floor(t);
  if (t < 1e-13 || t > 1.0 - 1e-13) t = 0.0;
  if (m_max <= kDirectLimit) return direct_kernel(t, 1, m_max);

  // sum_{m >= 1} cos(2 pi m t) / m^2 = pi^2 (1/6 - t + t^2), t in [0, 1]
  const double full = std::numbers::pi * std::numbers::pi * (1.0 / 6.0 - t + t * t);
  const std::int64_t n = m_max + 1;
  if (t == 0.0) return 2.0 * (full - trigamma_tail(static_cast<double>(n)));

  const double gap = 2.0 * std::sin(std::numbers::pi * std::min(t, 1.0 - t));  // |1 - u|
  const double reach = kAsymptoticReach / gap;
  if (reach > 1e8) throw Error(ErrorCode::InvalidArgument, "kernel phase too close to an integer");
  std::int64_t start = n;
  double head = 0.0;
  if (static_cast<double>(n) < reach) {
    start = static_cast<std::int64_t>(std::ceil(reach));
    head = 0.5 * direct_kernel(t, n, start - 1);
  }
  return 2.0 * (full - head - oscillating_tail(t, start));
}

std::vector<Complex> fold_to_base(const StepFunction& f, const StepFunction& g) {
  if (!(f.params() == g.params()) || f.n() != g.n())
    throw Error(ErrorCode::GridMisaligned, "folding needs a common grid");
  const CellIndex per_b = f.grid().cells_per_b();
  std::vector<Complex> out(static_cast<std::size_t>(per_b));
  const CellIndex lo = std::max(f.i_min(), g.i_min());
  const CellIndex hi = std::min(f.i_max(), g.i_max());
  for (CellIndex i = lo; i < hi; ++i) {
    const Complex prod = f.at(i) * std::conj(g.at(i));
    if (prod == 0.0) continue;
    const std::int64_t k = floor_div(i, per_b);
    out[static_cast<std::size_t>(i - k * per_b)] += std::pow(f.params().b(), static_cast<double>(k)) * prod;
  }
  return out;
}

LambdaSeries::LambdaSeries(const GeoGrid& grid)
    : grid_(grid), cells_(static_cast<std::size_t>(grid.cells_per_b())), period_(grid.params.b() - 1.0) {
  points_.resize(cells_);
  widths_.resize(cells_);
  for (std::size_t k = 0; k < cells_; ++k) {
    points_[k] = grid_.point(static_cast<CellIndex>(k)) / period_;
    widths_[k] = grid_.width(static_cast<CellIndex>(k));
  }
}

Complex LambdaSeries::coefficient(const std::vector<Complex>& folded, std::int64_t m) const {
  Complex s = 0.0;
  for (std::size_t k = 0; k < cells_; ++k) {
    if (folded[k] == 0.0) continue;
    s += folded[k] * lambda_integral(m, static_cast<CellIndex>(k), grid_);
  }
  return s;
}

std::vector<double> LambdaSeries::kernel_matrix(std::int64_t m_max) const {
  std::vector<double> km(cells_ * cells_);
  for (std::size_t k = 0; k < cells_; ++k) {
    km[k * cells_ + k] = lambda_square_kernel(0.0, m_max);
    for (std::size_t l = k + 1; l < cells_; ++l) {
      const double v = lambda_square_kernel(points_[l] - points_[k], m_max);
      km[k * cells_ + l] = v;
      km[l * cells_ + k] = v;
    }
  }
  return km;
}

std::vector<Complex> LambdaSeries::jumps(const std::vector<Complex>& folded) const {
  // alpha_k = G_{k-1} - G_k with periodic wrap at the boundary y = 1 ~ b
  std::vector<Complex> alpha(cells_);
  for (std::size_t k = 0; k < cells_; ++k) alpha[k] = folded[(k + cells_ - 1) % cells_] - folded[k];
  return alpha;
}

Complex LambdaSeries::mean_coefficient(const std::vector<Complex>& folded) const {
  Complex c0 = 0.0;
  for (std::size_t k = 0; k < cells_; ++k) c0 += folded[k] * widths_[k];
  return c0 / std::sqrt(period_);
}

double LambdaSeries::partial_energy(const std::vector<std::vector<Complex>>& folded, std::int64_t m_max) const {
  const std::vector<double> km = kernel_matrix(m_max);
  const double weight = period_ / (4.0 * std::numbers::pi * std::numbers::pi);
  double total = 0.0;
  for (const auto& g : folded) {
    total += std::norm(mean_coefficient(g));
    const auto alpha = jumps(g);
    double form = 0.0;
    for (std::size_t k = 0; k < cells_; ++k) {
      if (alpha[k] == 0.0) continue;
      Complex row = 0.0;
      for (std::size_t l = 0; l < cells_; ++l) row += km[k * cells_ + l] * std::conj(alpha[l]);
      form += (alpha[k] * row).real();
    }
    total += weight * form;
  }
  return total;
}

std::vector<Complex> LambdaSeries::partial_projection(const std::vector<Complex>& folded, std::int64_t m_max) const {
  const std::vector<double> km = kernel_matrix(m_max);
  const double weight = period_ / (4.0 * std::numbers::pi * std::numbers::pi);
  const Complex c0 = mean_coefficient(folded);
  const auto alpha = jumps(folded);
  std::vector<Complex> out(cells_);
  for (std::size_t i0 = 0; i0 < cells_; ++i0) {
    const std::size_t next = (i0 + 1) % cells_;
    Complex s = 0.0;
    for (std::size_t k = 0; k < cells_; ++k) s += alpha[k] * (km[k * cells_ + next] - km[k * cells_ + i0]);
    out[i0] = c0 * widths_[i0] / std::sqrt(period_) + weight * s;
  }
  return out;
}

}  // namespace mdframe

#pragma once

// Truncated Lambda_m expansions of step functions on [1, b).
//
// For a step function G on the qN cells of [1, b) the coefficients
// c_m = <G, Lambda_m> decay like 1/m, so partial sums over |m| <= M
// converge at rate 1/M. Summation by parts turns every such partial sum
// into a bilinear form in the jumps of G against the kernel
//   K_M(t) = sum_{0 < |m| <= M} e^{2 pi i m t} / m^2,
// which is evaluated in O(1) for any M (closed form minus asymptotic tail).

#include <cstdint>
#include <vector>

#include "mdframe/signal.hpp"

namespace mdframe {

/// K_M(t); real and even in t, 1-periodic.
double lambda_square_kernel(double t, std::int64_t m_max);

/// G_{i0} = sum_k b^k f_i conj(g_i) over i = i0 + k qN, for i0 in [0, qN).
/// Then <f, Lambda_m g> = sum_{i0} G_{i0} lambda_integral(m, i0).
std::vector<Complex> fold_to_base(const StepFunction& f, const StepFunction& g);

class LambdaSeries {
 public:
  explicit LambdaSeries(const GeoGrid& grid);

  /// c_m = sum_{i0} folded[i0] lambda_integral(m, i0).
  Complex coefficient(const std::vector<Complex>& folded, std::int64_t m) const;

  /// sum over the given folded functions of sum_{|m| <= m_max} |c_m|^2.
  double partial_energy(const std::vector<std::vector<Complex>>& folded, std::int64_t m_max) const;

  /// Per base cell i0: sum_{|m| <= m_max} c_m conj(lambda_integral(m, i0)),
  /// i.e. the cell integral of the truncated expansion of G.
  std::vector<Complex> partial_projection(const std::vector<Complex>& folded, std::int64_t m_max) const;

  const GeoGrid& grid() const noexcept { return grid_; }

 private:
  std::vector<double> kernel_matrix(std::int64_t m_max) const;
  std::vector<Complex> jumps(const std::vector<Complex>& folded) const;
  Complex mean_coefficient(const std::vector<Complex>& folded) const;

  GeoGrid grid_;
  std::size_t cells_ = 0;
  double period_ = 1.0;
  std::vector<double> points_;  // y_k / (b - 1), k in [0, qN)
  std::vector<double> widths_;
};

}  // namespace mdframe

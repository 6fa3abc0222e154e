#pragma once

// Piecewise-constant functions on the geometric grid
// cell i = [delta^{i/N}, delta^{(i+1)/N}).

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "mdframe/laurent.hpp"
#include "mdframe/lattice.hpp"

namespace mdframe {

using CellIndex = std::int64_t;

struct GeoGrid {
  MDParams params;
  int n = 1;  // cells per factor delta
  CellIndex i_min = 0;
  CellIndex i_max = 1;  // exclusive

  CellIndex size() const noexcept { return i_max - i_min; }
  /// Cells per factor b, i.e. the number of cells covering [1, b).
  CellIndex cells_per_b() const noexcept { return static_cast<CellIndex>(params.q()) * n; }
  /// Cells per factor beta.
  CellIndex cells_per_beta() const noexcept { return static_cast<CellIndex>(params.p()) * params.q() * n; }

  /// Left endpoint delta^{i/N}.
  double point(CellIndex i) const;
  double width(CellIndex i) const;
};

class StepFunction {
 public:
  StepFunction(GeoGrid grid, std::vector<Complex> values);
  /// All-zero function on the grid.
  explicit StepFunction(GeoGrid grid);

  /// The indicator of [delta^{lo/N}, delta^{hi/N}).
  static StepFunction indicator(const MDParams& params, int n, CellIndex lo, CellIndex hi);

  const GeoGrid& grid() const noexcept { return grid_; }
  const MDParams& params() const noexcept { return grid_.params; }
  int n() const noexcept { return grid_.n; }
  CellIndex i_min() const noexcept { return grid_.i_min; }
  CellIndex i_max() const noexcept { return grid_.i_max; }
  std::span<const Complex> values() const noexcept { return values_; }

  /// Value on cell i, zero outside the stored range.
  Complex at(CellIndex i) const noexcept;
  double norm_sq() const;
  double norm() const;

  StepFunction operator*(Complex s) const;
  /// Pointwise difference on the union of both ranges (same params and N).
  StepFunction operator-(const StepFunction& rhs) const;

 private:
  GeoGrid grid_;
  std::vector<Complex> values_;
};

/// Same function on N' = factor * N.
StepFunction refine(const StepFunction& f, int factor);

/// Both functions refined to lcm(N_f, N_g); params must match.
std::pair<StepFunction, StepFunction> common_grid(const StepFunction& f, const StepFunction& g);

/// D_{delta^k} f(x) = delta^{k/2} f(delta^k x).
StepFunction dilate(const StepFunction& f, std::int64_t k);

/// Integral over cell i of conj(Lambda_m).
Complex lambda_integral(std::int64_t m, CellIndex i, const GeoGrid& grid);

/// Integral over cell i of Lambda_m * conj(Lambda_m2).
Complex lambda_product_integral(std::int64_t m, std::int64_t m2, CellIndex i, const GeoGrid& grid);

/// sum_i f_i conj(g_i) w_i; grids must share params and N.
Complex inner_product(const StepFunction& f, const StepFunction& g);

/// <f, Lambda_m D_{a^j} psi>, exact for step functions.
Complex md_inner(const StepFunction& f, const StepFunction& psi, std::int64_t m, std::int64_t j);

/// Dilation indices j for which supp f meets supp D_{a^j} psi.
std::vector<std::int64_t> overlapping_dilations(const StepFunction& f, const StepFunction& psi);

/// Random window on cells [lo, hi): values uniform on the complex unit disk.
StepFunction random_window(const MDParams& params, int n, CellIndex lo, CellIndex hi, std::mt19937_64& rng);

/// Uniform double in [0, 1) from 53 random bits; fixed across platforms.
double uniform01(std::mt19937_64& rng);

}  // namespace mdframe

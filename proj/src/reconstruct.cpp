#include <cmath>
#include <numeric>

#include "mdframe/error.hpp"
#include "mdframe/frames.hpp"
#include "mdframe/lattice.hpp"

namespace mdframe {

Reconstruction reconstruct(const StepFunction& f_in, const StepFunction& psi_in, const StepFunction& dual_in,
                           std::int64_t m_max) {
  if (!(f_in.params() == psi_in.params()) || !(f_in.params() == dual_in.params()))
    throw Error(ErrorCode::GridMisaligned, "signal, window and dual must share parameters");
  const int n = std::lcm(std::lcm(f_in.n(), psi_in.n()), dual_in.n());
  const StepFunction f = refine(f_in, n / f_in.n());
  const StepFunction psi = refine(psi_in, n / psi_in.n());
  const StepFunction dual = refine(dual_in, n / dual_in.n());
  const MDParams& prm = f.params();
  const CellIndex per_b = f.grid().cells_per_b();
  const LambdaSeries series(GeoGrid{prm, n, 0, per_b});

  const std::vector<std::int64_t> js = overlapping_dilations(f, psi);
  CellIndex lo = f.i_min(), hi = f.i_max();
  for (std::int64_t j : js) {
    const CellIndex shift = static_cast<CellIndex>(prm.p()) * j * n;
    lo = std::min(lo, dual.i_min() - shift);
    hi = std::max(hi, dual.i_max() - shift);
  }
  std::vector<Complex> acc(static_cast<std::size_t>(std::max<CellIndex>(hi - lo, 0)));
  const GeoGrid out_grid{prm, n, lo, hi};

  for (std::int64_t j : js) {
    const std::int64_t k = static_cast<std::int64_t>(prm.p()) * j;
    // H(i0): cell integrals over [1, b) of the truncated expansion of f conj(D psi)
    const std::vector<Complex> h = series.partial_projection(fold_to_base(f, dilate(psi, k)), m_max);
    const StepFunction g = dilate(dual, k);
    for (CellIndex i = g.i_min(); i < g.i_max(); ++i) {
      const Complex v = g.at(i);
      if (v == 0.0) continue;
      const std::int64_t kappa = floor_div(i, per_b);
      const auto i0 = static_cast<std::size_t>(i - kappa * per_b);
      const double scale = std::pow(prm.b(), static_cast<double>(kappa)) / out_grid.width(i);
      acc[static_cast<std::size_t>(i - lo)] += v * scale * h[i0];
    }
  }

  StepFunction f_hat(out_grid, std::move(acc));
  const double err = (f_hat - f).norm();
  const double ref = f.norm();
  const double residual = ref > 0.0 ? err / ref : err;
  return Reconstruction{std::move(f_hat), residual, m_max, true};
}

Reconstruction reconstruct_adaptive(const StepFunction& f, const StepFunction& psi, const StepFunction& psi_dual,
                                    std::int64_t m_max, double tol, std::int64_t m_cap) {
  for (std::int64_t m = std::max<std::int64_t>(m_max, 1);; m *= 2) {
    Reconstruction r = reconstruct(f, psi, psi_dual, m);
    r.converged = r.residual < tol;
    if (r.converged || m >= m_cap) return r;
  }
}

}  // namespace mdframe

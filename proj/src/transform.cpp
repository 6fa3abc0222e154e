#include "mdframe/transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mdframe/error.hpp"
#include "mdframe/lattice.hpp"

namespace mdframe {

LaurentPoly theta_at_cell(const StepFunction& f, CellIndex i) {
  if (f.grid().size() <= 0) return {};
  const CellIndex period = f.grid().cells_per_beta();
  const std::int64_t pq = static_cast<std::int64_t>(f.params().p()) * f.params().q();
  // l with i + period l in [i_min, i_max)
  const std::int64_t l_lo = -floor_div(i - f.i_min(), period);
  const std::int64_t l_hi = floor_div(f.i_max() - 1 - i, period);
  if (l_hi < l_lo) return {};
  // degree d = -l, stored from d = -l_hi upward
  std::vector<Complex> c(static_cast<std::size_t>(l_hi - l_lo + 1));
  for (std::int64_t l = l_lo; l <= l_hi; ++l)
    c[static_cast<std::size_t>(l_hi - l)] = f.params().sqrt_delta_pow(pq * l) * f.at(i + period * l);
  return LaurentPoly::from_coeffs(static_cast<int>(-l_hi), std::move(c));
}

ThetaField theta(const StepFunction& f) {
  ThetaField t{f.params(), f.n(), {}};
  const CellIndex period = f.grid().cells_per_beta();
  t.cells.reserve(static_cast<std::size_t>(period));
  for (CellIndex i = 0; i < period; ++i) t.cells.push_back(theta_at_cell(f, i));
  return t;
}

namespace {

// Collects (cell, value) pairs and packs them into one StepFunction.
class CellWriter {
 public:
  void put(CellIndex i, Complex v) {
    lo_ = std::min(lo_, i);
    hi_ = std::max(hi_, i + 1);
    entries_.emplace_back(i, v);
  }

  StepFunction finish(const MDParams& params, int n) const {
    if (entries_.empty()) return StepFunction(GeoGrid{params, n, 0, 0});
    std::vector<Complex> v(static_cast<std::size_t>(hi_ - lo_));
    for (const auto& [i, x] : entries_) v[static_cast<std::size_t>(i - lo_)] = x;
    return StepFunction(GeoGrid{params, n, lo_, hi_}, std::move(v));
  }

 private:
  CellIndex lo_ = std::numeric_limits<CellIndex>::max();
  CellIndex hi_ = std::numeric_limits<CellIndex>::min();
  std::vector<std::pair<CellIndex, Complex>> entries_;
};

}  // namespace

StepFunction theta_inverse(const ThetaField& t) {
  const std::int64_t pq = static_cast<std::int64_t>(t.params.p()) * t.params.q();
  const CellIndex period = pq * t.n;
  if (static_cast<CellIndex>(t.cells.size()) != period)
    throw Error(ErrorCode::GridMisaligned, "theta field must cover the pqN base cells");
  CellWriter out;
  for (CellIndex i = 0; i < period; ++i) {
    const LaurentPoly& poly = t.cells[static_cast<std::size_t>(i)];
    for (int d = poly.low_degree(); !poly.is_zero() && d <= poly.high_degree(); ++d) {
      const std::int64_t l = -d;
      out.put(i + period * l, t.params.sqrt_delta_pow(-pq * l) * poly.coeff(d));
    }
  }
  return out.finish(t.params, t.n);
}

double field_norm_sq(const ThetaField& t) {
  const GeoGrid grid{t.params, t.n, 0, 1};
  double s = 0.0;
  for (std::size_t i = 0; i < t.cells.size(); ++i) s += grid.width(static_cast<CellIndex>(i)) * t.cells[i].sum_sq();
  return s;
}

GammaField gamma(const StepFunction& f) {
  const MDParams& prm = f.params();
  GammaField g{prm, f.n(), {}};
  const CellIndex per_b = f.grid().cells_per_b();
  g.cells.resize(static_cast<std::size_t>(per_b));
  for (CellIndex i = 0; i < per_b; ++i) {
    auto& comp = g.cells[static_cast<std::size_t>(i)];
    comp.reserve(static_cast<std::size_t>(prm.p()));
    for (int s = 0; s < prm.p(); ++s)
      comp.push_back(prm.sqrt_delta_pow(static_cast<std::int64_t>(prm.q()) * s) * theta_at_cell(f, i + per_b * s));
  }
  return g;
}

double field_norm_sq(const GammaField& g) {
  const GeoGrid grid{g.params, g.n, 0, 1};
  double s = 0.0;
  for (std::size_t i = 0; i < g.cells.size(); ++i) {
    double cell = 0.0;
    for (const auto& poly : g.cells[i]) cell += poly.sum_sq();
    s += grid.width(static_cast<CellIndex>(i)) * cell;
  }
  return s;
}

LaurentMatrix matrix_at_cell(const StepFunction& psi, CellIndex i) {
  const MDParams& prm = psi.params();
  LaurentMatrix m(static_cast<std::size_t>(prm.q()), static_cast<std::size_t>(prm.p()));
  for (int r = 0; r < prm.q(); ++r) {
    for (int s = 0; s < prm.p(); ++s) {
      const std::int64_t k = static_cast<std::int64_t>(prm.p()) * r + static_cast<std::int64_t>(prm.q()) * s;
      m(static_cast<std::size_t>(r), static_cast<std::size_t>(s)) =
          prm.sqrt_delta_pow(k) * theta_at_cell(psi, i + k * psi.n());
    }
  }
  return m;
}

TransformMatrix transform_matrix(const StepFunction& psi) {
  TransformMatrix t{psi.params(), psi.n(), {}};
  t.cells.reserve(static_cast<std::size_t>(psi.n()));
  for (CellIndex i = 0; i < psi.n(); ++i) t.cells.push_back(matrix_at_cell(psi, i));
  return t;
}

StepFunction window_from_matrix(const TransformMatrix& psi_matrix) {
  const MDParams& prm = psi_matrix.params;
  const int n = psi_matrix.n;
  if (static_cast<int>(psi_matrix.cells.size()) != n)
    throw Error(ErrorCode::GridMisaligned, "transform matrix must hold N cells");
  const std::int64_t pq = static_cast<std::int64_t>(prm.p()) * prm.q();
  CellWriter out;
  for (int i = 0; i < n; ++i) {
    const LaurentMatrix& m = psi_matrix.cells[static_cast<std::size_t>(i)];
    if (m.rows() != static_cast<std::size_t>(prm.q()) || m.cols() != static_cast<std::size_t>(prm.p()))
      throw Error(ErrorCode::GridMisaligned, "transform matrix cells must be q x p");
    for (int r = 0; r < prm.q(); ++r) {
      for (int s = 0; s < prm.p(); ++s) {
        const LaurentPoly& poly = m(static_cast<std::size_t>(r), static_cast<std::size_t>(s));
        if (poly.is_zero()) continue;
        const std::int64_t k = static_cast<std::int64_t>(prm.p()) * r + static_cast<std::int64_t>(prm.q()) * s;
        for (int d = poly.low_degree(); d <= poly.high_degree(); ++d) {
          const std::int64_t j = -d;
          out.put(i + k * n + pq * n * j, prm.sqrt_delta_pow(-pq * j - k) * poly.coeff(d));
        }
      }
    }
  }
  return out.finish(prm, n);
}

std::vector<LaurentMatrix> extend_matrix(const TransformMatrix& psi_matrix, std::int64_t cell_offset) {
  if (cell_offset == 0) return psi_matrix.cells;
  const StepFunction psi = window_from_matrix(psi_matrix);
  std::vector<LaurentMatrix> out;
  out.reserve(psi_matrix.cells.size());
  for (int i = 0; i < psi_matrix.n; ++i) out.push_back(matrix_at_cell(psi, i + cell_offset));
  return out;
}

double check_quasi_periodicity(const StepFunction& f, std::int64_t j, std::int64_t /*m*/) {
  // xi -> xi + m is the identity on integer-degree Laurent data
  const CellIndex period = f.grid().cells_per_beta();
  const std::int64_t pq = static_cast<std::int64_t>(f.params().p()) * f.params().q();
  const Complex scale = f.params().sqrt_delta_pow(-pq * j);
  double worst = 0.0;
  for (CellIndex i = 0; i < period; ++i) {
    const LaurentPoly lhs = theta_at_cell(f, i + period * j);
    const LaurentPoly rhs = scale * theta_at_cell(f, i).shifted(static_cast<int>(j));
    const double norm = std::max(1.0, std::max(lhs.max_abs_coeff(), rhs.max_abs_coeff()));
    worst = std::max(worst, coeff_distance(lhs, rhs) / norm);
  }
  return worst;
}

RecurrenceResiduals check_recurrences(const TransformMatrix& psi_matrix, int l_range) {
  const MDParams& prm = psi_matrix.params;
  const StepFunction psi = window_from_matrix(psi_matrix);
  const int n = psi_matrix.n;
  RecurrenceResiduals res;
  auto relative = [](const LaurentMatrix& lhs, const LaurentMatrix& rhs) {
    const double norm = std::max(1.0, std::max(lhs.max_abs_coeff(), rhs.max_abs_coeff()));
    return coeff_distance(lhs, rhs) / norm;
  };

  for (int l = -l_range; l <= l_range; ++l) {
    for (int m = 0; m < prm.q(); ++m) {
      const std::int64_t power = static_cast<std::int64_t>(l) * prm.q() + m;  // a^{lq+m} = delta^{p(lq+m)}
      const LaurentMatrix um = structural_matrix(prm, StructuralKind::Um, m);
      const Complex scale = prm.sqrt_delta_pow(-prm.p() * power);
      for (int i = 0; i < n; ++i) {
        const LaurentMatrix lhs = matrix_at_cell(psi, i + prm.p() * power * n);
        LaurentMatrix zl = LaurentMatrix::identity(prm.q());
        for (std::size_t d = 0; d < zl.rows(); ++d) zl(d, d) = LaurentPoly::monomial(l);
        const LaurentMatrix rhs = scale * (zl * um * psi_matrix.cells[static_cast<std::size_t>(i)]);
        res.dilation_by_a = std::max(res.dilation_by_a, relative(lhs, rhs));
      }
    }
  }

  if (prm.p() > 1 && prm.q() > 1) {
    const LaurentMatrix lq = structural_matrix(prm, StructuralKind::Lq);
    const LaurentMatrix rp = structural_matrix(prm, StructuralKind::Rp);
    const Complex scale = prm.sqrt_delta_pow(-1);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const LaurentMatrix lhs = matrix_at_cell(psi, i + n);
      const LaurentMatrix rhs = scale * (lq * psi_matrix.cells[static_cast<std::size_t>(i)] * rp);
      worst = std::max(worst, relative(lhs, rhs));
    }
    res.dilation_by_delta = worst;
  }
  return res;
}

double max_cell_error(const StepFunction& f, const StepFunction& g) {
  const CellIndex lo = std::min(f.i_min(), g.i_min());
  const CellIndex hi = std::max(f.i_max(), g.i_max());
  double worst = 0.0;
  for (CellIndex i = lo; i < hi; ++i) worst = std::max(worst, std::abs(f.at(i) - g.at(i)));
  return worst;
}

}  // namespace mdframe

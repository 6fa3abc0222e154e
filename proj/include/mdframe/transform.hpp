#pragma once

// The Theta_beta transform, the vectorization Gamma and the q x p transform
// matrix Psi, all held as exact Laurent data in z = e^{2 pi i xi}.

#include <cstdint>
#include <optional>
#include <vector>

#include "mdframe/laurent.hpp"
#include "mdframe/signal.hpp"

namespace mdframe {

/// Theta_beta f(x, .) for x on cell i (any i): sum_l beta^{l/2} f_{i + pqNl} z^{-l}.
LaurentPoly theta_at_cell(const StepFunction& f, CellIndex i);

struct ThetaField {
  MDParams params;
  int n = 1;
  std::vector<LaurentPoly> cells;  // base cells [0, pqN) covering [1, beta)
};

ThetaField theta(const StepFunction& f);
StepFunction theta_inverse(const ThetaField& t);

/// sum_i w_i sum_l |c_{i,l}|^2, the L^2 norm squared over [1, beta) x [0, 1).
double field_norm_sq(const ThetaField& t);

struct GammaField {
  MDParams params;
  int n = 1;
  std::vector<std::vector<LaurentPoly>> cells;  // [qN cells of [1, b)][p components]
};

/// (Gamma f)_s = b^{s/2} Theta_beta f(b^s x, .).
GammaField gamma(const StepFunction& f);
double field_norm_sq(const GammaField& g);

struct TransformMatrix {
  MDParams params;
  int n = 1;
  std::vector<LaurentMatrix> cells;  // N cells of [1, delta), each q x p
};

/// Psi at cell i (any i): entry (r, s) = a^{r/2} b^{s/2} Theta_beta psi(a^r b^s x, .).
LaurentMatrix matrix_at_cell(const StepFunction& psi, CellIndex i);

TransformMatrix transform_matrix(const StepFunction& psi);
StepFunction window_from_matrix(const TransformMatrix& psi_matrix);

/// Psi on the cells [offset, offset + N), recovered from the window by
/// re-indexing; offset 0 returns the stored matrices.
std::vector<LaurentMatrix> extend_matrix(const TransformMatrix& psi_matrix, std::int64_t cell_offset);

/// Max coefficient distance between Theta f(beta^j x, xi + m) and
/// beta^{-j/2} e^{2 pi i j xi} Theta f(x, xi) over the base cells.
double check_quasi_periodicity(const StepFunction& f, std::int64_t j, std::int64_t m);

struct RecurrenceResiduals {
  double dilation_by_a = 0.0;             // Psi(a^{lq+m} x) against z^l U_m Psi(x)
  std::optional<double> dilation_by_delta;  // Psi(delta x) against L_q Psi(x) R_p; empty when p or q is 1
};

/// Checks the a-recurrence for |l| <= l_range and all m in N_q, and the
/// delta-recurrence when p, q > 1.
RecurrenceResiduals check_recurrences(const TransformMatrix& psi_matrix, int l_range = 2);

/// Max absolute difference of two step functions over the union of their ranges.
double max_cell_error(const StepFunction& f, const StepFunction& g);

}  // namespace mdframe

#pragma once

// Completeness, frame bounds, synthesis from the (U, lambda, V) factorization,
// the density theorem, coefficient analysis, dual windows and reconstruction.

#include <cstdint>
#include <optional>
#include <vector>

#include "mdframe/lambda_series.hpp"
#include "mdframe/transform.hpp"

namespace mdframe {

inline constexpr int kSampledRankSamples = 256;
inline constexpr double kRankTolerance = 1e-10;
inline constexpr double kDetZeroTolerance = 1e-12;
inline constexpr double kFrameThreshold = 1e-10;
inline constexpr int kMaxXiSamples = 4096;
inline constexpr double kSpectralTolerance = 1e-6;

/// Psi* Psi as an exact Laurent matrix.
LaurentMatrix gram(const LaurentMatrix& psi);

struct CompletenessResult {
  bool complete = false;
  std::vector<int> failure_cells;
  bool exact = true;  // false when the sampled fallback decided
};

/// Exact determinant test of det(Psi* Psi) per cell; sampled fallback for p > 6.
CompletenessResult completeness(const TransformMatrix& psi_matrix);
/// Rank test on K uniform xi-samples per cell by singular values.
CompletenessResult sampled_completeness(const TransformMatrix& psi_matrix, int samples = kSampledRankSamples);

struct SpectralReport {
  int samples = 0;  // final K
  double lambda_min_global = 0.0;
  double lambda_max_global = 0.0;
  bool converged = false;
  std::vector<int> k_history;
  std::vector<double> min_history;
  std::vector<double> max_history;
  std::vector<std::vector<std::vector<double>>> profiles;  // [cell][k][p], at the final K
};

/// Eigenvalue extrema of Psi* Psi over the given cells and xi = k / K,
/// doubling K until both extrema move by less than 1e-6 relative.
SpectralReport spectral_extrema(const std::vector<LaurentMatrix>& cells, int samples, bool keep_profiles = false);

struct FrameBounds {
  SpectralReport spectrum;
  bool frame = false;
  double a_est = 0.0;
  double b_est = 0.0;
};

FrameBounds frame_bounds(const TransformMatrix& psi_matrix, int samples = 256, bool keep_profiles = false);

struct BoundsConsistency {
  double residual = 0.0;
  double max_fundamental = 0.0;  // over [1, delta)
  double min_fundamental = 0.0;
  double max_period = 0.0;  // over [1, b)
  double min_period = 0.0;
};

/// Compares eigenvalue extrema over [1, b) with delta^{-l} times those over [1, delta).
BoundsConsistency bounds_consistency(const TransformMatrix& psi_matrix, int samples = 256);

struct SynthesisCell {
  std::vector<LaurentPoly> lambdas;  // p diagonal entries
  LaurentMatrix u;                   // q x q, unitary on |z| = 1
  LaurentMatrix v;                   // p x p, unitary on |z| = 1
};

struct SynthesisSpec {
  MDParams params;
  int n = 1;
  std::vector<SynthesisCell> cells;  // N cells of [1, delta)
};

struct SynthesisPrediction {
  bool complete = false;
  bool frame = false;
  double a_pred = 0.0;
  double b_pred = 0.0;
  std::vector<int> vanishing_cells;
};

struct SynthesisResult {
  StepFunction psi;
  TransformMatrix psi_matrix;
  SynthesisPrediction prediction;
};

/// lambda_s = 1, U = I, V = I on every cell.
SynthesisSpec witness_spec(const MDParams& params, int n);

/// Psi = U [diag(lambda); 0] V per cell and its window; the prediction is
/// read off the lambda data alone.
SynthesisResult synthesize(const SynthesisSpec& spec, int samples = 256);

/// p <= q; throws NonCoprime.
bool density_verdict(int p, int q);

struct CoefficientEntry {
  std::int64_t m;
  std::int64_t j;
  Complex time_domain;
  Complex transform_domain;
  double discrepancy;
};

struct AnalysisReport {
  std::vector<CoefficientEntry> coefficients;  // |m| <= the requested m_max
  double max_discrepancy = 0.0;
  double exact_total = 0.0;
  double truncated_total = 0.0;
  std::int64_t m_max_final = 0;
  double relative_gap = 0.0;
  bool converged = false;
  std::vector<std::pair<std::int64_t, double>> history;  // (m_max, truncated total)
};

inline constexpr std::int64_t kMaxModulationIndex = std::int64_t{1} << 40;

/// Coefficients by the time-domain and transform-domain routes, the exact
/// total, and the truncated sum with m_max doubled until within tol of it.
AnalysisReport analysis_coefficients(const StepFunction& f, const StepFunction& psi, std::int64_t m_max, double tol,
                                     std::int64_t m_cap = kMaxModulationIndex);

struct DualResult {
  StepFunction window;
  int samples = 0;
  int truncation = 0;
  double identity_residual = 0.0;
  bool converged = false;
};

inline constexpr int kMaxDualSamples = 8192;
inline constexpr int kMaxDualTruncation = 64;
inline constexpr double kDualIdentityTolerance = 1e-10;
inline constexpr double kDualNoiseFloor = 1e-14;

/// Psi (Psi* Psi)^{-1} sampled at K points per cell and truncated to degrees
/// |d| <= J, with K and J doubled until the identity Psi~^T conj(Psi) = I holds
/// off the sampling grid. Throws NotAFrame, and NoMdDual when q > 1.
DualResult dual_window(const TransformMatrix& psi_matrix, int samples = 256, int truncation = 32);

struct Reconstruction {
  StepFunction f_hat;
  double residual = 0.0;
  std::int64_t m_max = 0;
  bool converged = true;
};

/// Cell averages of sum_{|m| <= m_max, j} <f, Lambda_m D_{a^j} psi> Lambda_m D_{a^j} psi_dual.
Reconstruction reconstruct(const StepFunction& f, const StepFunction& psi, const StepFunction& psi_dual,
                           std::int64_t m_max);

/// Doubles m_max until the residual is below tol or the cap is reached.
Reconstruction reconstruct_adaptive(const StepFunction& f, const StepFunction& psi, const StepFunction& psi_dual,
                                    std::int64_t m_max, double tol, std::int64_t m_cap = kMaxModulationIndex);

struct FrameVerdict {
  bool density_ok = false;
  bool complete = false;
  bool frame = false;
  double a_est = 0.0;
  double b_est = 0.0;
  double bound_gap = 1.0;
  bool tight_possible = false;
  std::vector<int> failure_cells;
  int k_final = 0;
  bool converged = true;
};

struct Analysis {
  FrameVerdict verdict;
  SpectralReport spectrum;
};

Analysis analyze(const TransformMatrix& psi_matrix, int samples = 256, bool keep_profiles = false);

struct TightnessReport {
  bool gap_holds = false;  // B >= delta^{q-1} A - 1e-8
  bool tight_possible = false;
  double ratio = 0.0;           // B / A
  double required_ratio = 1.0;  // delta^{q-1}
};

TightnessReport tightness_check(const FrameVerdict& verdict, const MDParams& params);

}  // namespace mdframe

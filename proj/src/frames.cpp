#include "mdframe/frames.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "mdframe/error.hpp"
#include "mdframe/lattice.hpp"
#include "mdframe/linalg.hpp"
#include "mdframe/parallel.hpp"

namespace mdframe {

LaurentMatrix gram(const LaurentMatrix& psi) { return psi.adjoint() * psi; }

namespace {

std::vector<int> all_cells(const TransformMatrix& t) {
  std::vector<int> cells(t.cells.size());
  std::iota(cells.begin(), cells.end(), 0);
  return cells;
}

bool is_power_of_two(int k) { return k > 0 && (k & (k - 1)) == 0; }

}  // namespace

CompletenessResult sampled_completeness(const TransformMatrix& psi_matrix, int samples) {
  CompletenessResult res;
  res.exact = false;
  if (psi_matrix.params.p() > psi_matrix.params.q()) {
    res.failure_cells = all_cells(psi_matrix);
    return res;
  }
  std::vector<char> full(psi_matrix.cells.size(), 0);
  parallel_for(psi_matrix.cells.size(), [&](std::size_t c) {
    for (int k = 0; k < samples && !full[c]; ++k) {
      const auto sv = singular_values(psi_matrix.cells[c].eval_at(static_cast<double>(k) / samples));
      if (!sv.empty() && sv.front() > 0.0 && sv.back() > kRankTolerance * sv.front()) full[c] = 1;
    }
  });
  for (std::size_t c = 0; c < full.size(); ++c)
    if (!full[c]) res.failure_cells.push_back(static_cast<int>(c));
  res.complete = res.failure_cells.empty();
  return res;
}

CompletenessResult completeness(const TransformMatrix& psi_matrix) {
  const int p = psi_matrix.params.p();
  if (p > psi_matrix.params.q()) {
    CompletenessResult res;
    res.failure_cells = all_cells(psi_matrix);
    return res;
  }
  if (static_cast<std::size_t>(p) > kMaxLeibnizOrder) return sampled_completeness(psi_matrix);

  CompletenessResult res;
  std::vector<char> full(psi_matrix.cells.size(), 0);
  parallel_for(psi_matrix.cells.size(), [&](std::size_t c) {
    const LaurentMatrix h = gram(psi_matrix.cells[c]);
    const double scale = std::pow(h.max_abs_coeff(), p);
    if (scale == 0.0) return;
    full[c] = laurent_det(h).max_abs_coeff() >= kDetZeroTolerance * scale;
  });
  for (std::size_t c = 0; c < full.size(); ++c)
    if (!full[c]) res.failure_cells.push_back(static_cast<int>(c));
  res.complete = res.failure_cells.empty();
  return res;
}

namespace {

// Eigenvalues of each Gram matrix at xi = k / K; [cell][k][p].
using Profiles = std::vector<std::vector<std::vector<double>>>;

std::vector<double> gram_eigenvalues(const LaurentMatrix& h, double xi) {
  const CMatrix m = h.eval_at(xi);
  if (m.rows() == 1) return {m(0, 0).real()};
  return hermitian_eigenvalues(m).values;
}

// Refines profiles sampled at K/2 to K by evaluating only the odd samples.
void sample_profiles(const std::vector<LaurentMatrix>& grams, int samples, Profiles& profiles) {
  const bool fresh = profiles.empty();
  if (fresh) profiles.resize(grams.size());
  parallel_for(grams.size(), [&](std::size_t c) {
    std::vector<std::vector<double>> next(static_cast<std::size_t>(samples));
    for (int k = 0; k < samples; ++k) {
      if (!fresh && k % 2 == 0) {
        next[static_cast<std::size_t>(k)] = std::move(profiles[c][static_cast<std::size_t>(k / 2)]);
      } else {
        next[static_cast<std::size_t>(k)] = gram_eigenvalues(grams[c], static_cast<double>(k) / samples);
      }
    }
    profiles[c] = std::move(next);
  });
}

std::pair<double, double> extrema(const Profiles& profiles) {
  double lo = HUGE_VAL, hi = 0.0;
  for (const auto& cell : profiles)
    for (const auto& ev : cell) {
      if (ev.empty()) continue;
      lo = std::min(lo, ev.front());
      hi = std::max(hi, ev.back());
    }
  if (lo == HUGE_VAL) lo = 0.0;
  return {std::max(lo, 0.0), std::max(hi, 0.0)};
}

std::vector<LaurentMatrix> grams_of(const std::vector<LaurentMatrix>& cells) {
  std::vector<LaurentMatrix> grams(cells.size());
  parallel_for(cells.size(), [&](std::size_t c) { grams[c] = gram(cells[c]); });
  return grams;
}

}  // namespace

SpectralReport spectral_extrema(const std::vector<LaurentMatrix>& cells, int samples, bool keep_profiles) {
  if (samples < 16 || !is_power_of_two(samples) || samples > kMaxXiSamples)
    throw Error(ErrorCode::InvalidArgument, "xi-samples must be a power of two in [16, 4096]");
  const auto grams = grams_of(cells);
  SpectralReport rep;
  Profiles profiles;
  for (int k = samples;; k *= 2) {
    sample_profiles(grams, k, profiles);
    const auto [lo, hi] = extrema(profiles);
    rep.k_history.push_back(k);
    rep.min_history.push_back(lo);
    rep.max_history.push_back(hi);
    rep.samples = k;
    rep.lambda_min_global = lo;
    rep.lambda_max_global = hi;
    if (rep.k_history.size() >= 2) {
      const double prev_lo = rep.min_history[rep.min_history.size() - 2];
      const double prev_hi = rep.max_history[rep.max_history.size() - 2];
      const bool hi_ok = std::abs(hi - prev_hi) <= kSpectralTolerance * hi;
      const bool lo_ok = std::abs(lo - prev_lo) <= kSpectralTolerance * std::max(lo, kFrameThreshold * hi);
      if (hi_ok && lo_ok) {
        rep.converged = true;
        break;
      }
    }
    if (k >= kMaxXiSamples) break;
  }
  if (keep_profiles) rep.profiles = std::move(profiles);
  return rep;
}

FrameBounds frame_bounds(const TransformMatrix& psi_matrix, int samples, bool keep_profiles) {
  FrameBounds fb;
  fb.spectrum = spectral_extrema(psi_matrix.cells, samples, keep_profiles);
  const double lo = fb.spectrum.lambda_min_global;
  const double hi = fb.spectrum.lambda_max_global;
  fb.frame = hi > 0.0 && lo > kFrameThreshold * hi;
  fb.a_est = lo / psi_matrix.params.bound_gap();
  fb.b_est = hi;
  return fb;
}

BoundsConsistency bounds_consistency(const TransformMatrix& psi_matrix, int samples) {
  const MDParams& prm = psi_matrix.params;
  BoundsConsistency bc;
  Profiles fundamental;
  sample_profiles(grams_of(psi_matrix.cells), samples, fundamental);
  std::tie(bc.min_fundamental, bc.max_fundamental) = extrema(fundamental);

  std::vector<LaurentMatrix> period;
  for (int l = 0; l < prm.q(); ++l) {
    auto shifted = extend_matrix(psi_matrix, static_cast<std::int64_t>(l) * psi_matrix.n);
    period.insert(period.end(), shifted.begin(), shifted.end());
  }
  Profiles over_b;
  sample_profiles(grams_of(period), samples, over_b);
  std::tie(bc.min_period, bc.max_period) = extrema(over_b);

  if (bc.max_fundamental == 0.0) {
    bc.residual = bc.max_period == 0.0 ? 0.0 : 1.0;
    return bc;
  }
  const double expected_min = bc.min_fundamental / prm.bound_gap();
  const double floor = kFrameThreshold * bc.max_fundamental / prm.bound_gap();
  bc.residual = std::max(std::abs(bc.max_period - bc.max_fundamental) / bc.max_fundamental,
                         std::abs(bc.min_period - expected_min) / std::max(expected_min, floor));
  return bc;
}

SynthesisSpec witness_spec(const MDParams& params, int n) {
  SynthesisSpec spec{params, n, {}};
  for (int i = 0; i < n; ++i) {
    SynthesisCell cell;
    cell.lambdas.assign(static_cast<std::size_t>(params.p()), LaurentPoly(1.0));
    cell.u = LaurentMatrix::identity(static_cast<std::size_t>(params.q()));
    cell.v = LaurentMatrix::identity(static_cast<std::size_t>(params.p()));
    spec.cells.push_back(std::move(cell));
  }
  return spec;
}

namespace {

bool is_unitary(const LaurentMatrix& m) {
  if (m.rows() != m.cols()) return false;
  return coeff_distance(m.adjoint() * m, LaurentMatrix::identity(m.rows())) < 1e-12;
}

}  // namespace

SynthesisResult synthesize(const SynthesisSpec& spec, int samples) {
  const MDParams& prm = spec.params;
  const auto p = static_cast<std::size_t>(prm.p());
  const auto q = static_cast<std::size_t>(prm.q());
  if (p > q)
    throw Error(ErrorCode::DensityViolated, "p > q: no complete system exists (log_b a = " + std::to_string(prm.p()) +
                                                "/" + std::to_string(prm.q()) + " > 1)");
  if (static_cast<int>(spec.cells.size()) != spec.n)
    throw Error(ErrorCode::InvalidArgument, "synthesis spec must list N cells");

  TransformMatrix t{prm, spec.n, {}};
  std::vector<LaurentMatrix> diagonals;
  SynthesisPrediction pred;
  for (std::size_t c = 0; c < spec.cells.size(); ++c) {
    const SynthesisCell& cell = spec.cells[c];
    const std::string where = "cell " + std::to_string(c);
    if (cell.lambdas.size() != p) throw Error(ErrorCode::InvalidArgument, where + ": expected p lambdas");
    if (cell.u.rows() != q || cell.u.cols() != q || !is_unitary(cell.u))
      throw Error(ErrorCode::UnitarityViolated, where + ": U is not a q x q unitary");
    if (cell.v.rows() != p || cell.v.cols() != p || !is_unitary(cell.v))
      throw Error(ErrorCode::UnitarityViolated, where + ": V is not a p x p unitary");
    LaurentMatrix d(q, p), dp(p, p);
    bool vanishes = false;
    for (std::size_t s = 0; s < p; ++s) {
      d(s, s) = cell.lambdas[s];
      dp(s, s) = cell.lambdas[s];
      vanishes = vanishes || cell.lambdas[s].is_zero();
    }
    if (vanishes) pred.vanishing_cells.push_back(static_cast<int>(c));
    t.cells.push_back(cell.u * d * cell.v);
    diagonals.push_back(std::move(dp));
  }
  pred.complete = pred.vanishing_cells.empty();
  const SpectralReport lam = spectral_extrema(diagonals, samples);
  pred.b_pred = lam.lambda_max_global;
  pred.a_pred = lam.lambda_min_global / prm.bound_gap();
  pred.frame = pred.complete && lam.lambda_max_global > 0.0 &&
               lam.lambda_min_global > kFrameThreshold * lam.lambda_max_global;

  StepFunction psi = window_from_matrix(t);
  return SynthesisResult{std::move(psi), std::move(t), pred};
}

bool density_verdict(int p, int q) {
  if (p < 1 || q < 1) throw Error(ErrorCode::InvalidArgument, "p and q must be positive");
  if (std::gcd(p, q) != 1) throw Error(ErrorCode::NonCoprime, "gcd(p, q) must be 1");
  return p <= q;
}

AnalysisReport analysis_coefficients(const StepFunction& f_in, const StepFunction& psi_in, std::int64_t m_max,
                                     double tol, std::int64_t m_cap) {
  if (m_max < 0) throw Error(ErrorCode::InvalidArgument, "m_max must be non-negative");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  const auto [f, psi] = common_grid(f_in, psi_in);
  const MDParams& prm = f.params();
  const int q = prm.q();
  const GeoGrid base{prm, f.n(), 0, f.grid().cells_per_b()};
  const auto cells = static_cast<std::size_t>(base.size());
  AnalysisReport rep;

  // transform route: G_r(x, .) = (conj(Psi) Gamma f)_r on the cells of [1, b)
  const GammaField gf = gamma(f);
  std::vector<std::vector<LaurentPoly>> g(static_cast<std::size_t>(q), std::vector<LaurentPoly>(cells));
  parallel_for(cells, [&](std::size_t i0) {
    const LaurentMatrix m = matrix_at_cell(psi, static_cast<CellIndex>(i0));
    for (int r = 0; r < q; ++r) {
      LaurentPoly acc;
      for (int s = 0; s < prm.p(); ++s)
        acc += m(static_cast<std::size_t>(r), static_cast<std::size_t>(s)).conj_reflect() * gf.cells[i0][static_cast<std::size_t>(s)];
      g[static_cast<std::size_t>(r)][i0] = std::move(acc);
    }
  });
  for (int r = 0; r < q; ++r)
    for (std::size_t i0 = 0; i0 < cells; ++i0)
      rep.exact_total += base.width(static_cast<CellIndex>(i0)) * g[static_cast<std::size_t>(r)][i0].sum_sq();

  // dilation indices: overlaps in time, plus any degree the transform route produced
  const std::vector<std::int64_t> overlap = overlapping_dilations(f, psi);
  std::set<std::int64_t> js(overlap.begin(), overlap.end());
  for (int r = 0; r < q; ++r)
    for (const auto& poly : g[static_cast<std::size_t>(r)])
      for (int d = poly.low_degree(); !poly.is_zero() && d <= poly.high_degree(); ++d)
        if (poly.coeff(d) != 0.0) js.insert(static_cast<std::int64_t>(d) * q + r);

  const std::vector<std::int64_t> j_list(js.begin(), js.end());
  const std::size_t per_j = static_cast<std::size_t>(2 * m_max + 1);
  rep.coefficients.resize(j_list.size() * per_j);
  parallel_for(j_list.size(), [&](std::size_t jj) {
    const std::int64_t j = j_list[jj];
    const std::int64_t degree = floor_div(j, q);
    const auto r = static_cast<std::size_t>(j - degree * q);
    std::vector<Complex> folded(cells);
    for (std::size_t i0 = 0; i0 < cells; ++i0) folded[i0] = g[r][i0].coeff(static_cast<int>(degree));
    for (std::int64_t m = -m_max; m <= m_max; ++m) {
      Complex transform = 0.0;
      for (std::size_t i0 = 0; i0 < cells; ++i0)
        if (folded[i0] != 0.0) transform += folded[i0] * lambda_integral(m, static_cast<CellIndex>(i0), base);
      const Complex time = md_inner(f, psi, m, j);
      rep.coefficients[jj * per_j + static_cast<std::size_t>(m + m_max)] =
          CoefficientEntry{m, j, time, transform, std::abs(time - transform)};
    }
  });
  for (const auto& e : rep.coefficients) rep.max_discrepancy = std::max(rep.max_discrepancy, e.discrepancy);

  // truncated time-domain sums, evaluated through the folded products
  const LambdaSeries series(base);
  std::vector<std::vector<Complex>> folds;
  for (std::int64_t j : overlap) folds.push_back(fold_to_base(f, dilate(psi, static_cast<std::int64_t>(prm.p()) * j)));
  for (std::int64_t m = std::max<std::int64_t>(m_max, 1);; m *= 2) {
    const double total = series.partial_energy(folds, m);
    rep.history.emplace_back(m, total);
    rep.truncated_total = total;
    rep.m_max_final = m;
    const double gap = std::abs(rep.exact_total - total);
    rep.relative_gap = rep.exact_total > 0.0 ? gap / rep.exact_total : gap;
    if (rep.relative_gap <= tol) {
      rep.converged = true;
      break;
    }
    if (m >= m_cap) break;
  }
  return rep;
}

namespace {

// Golden-ratio offsets keep the test points off every dyadic sampling grid.
constexpr int kIdentityProbes = 64;
constexpr double kProbeOffset = 0.3819660112501051;

double identity_residual(const TransformMatrix& psi_matrix, const TransformMatrix& dual) {
  const auto p = static_cast<std::size_t>(psi_matrix.params.p());
  double worst = 0.0;
  for (std::size_t c = 0; c < psi_matrix.cells.size(); ++c) {
    for (int t = 0; t < kIdentityProbes; ++t) {
      const double xi = (t + kProbeOffset) / kIdentityProbes;
      const CMatrix psi = psi_matrix.cells[c].eval_at(xi);
      const CMatrix dl = dual.cells[c].eval_at(xi);
      CMatrix prod(p, p);
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t k = 0; k < p; ++k) {
          Complex s = 0.0;
          for (std::size_t r = 0; r < psi.rows(); ++r) s += dl(r, i) * std::conj(psi(r, k));
          prod(i, k) = s;
        }
      worst = std::max(worst, (prod - CMatrix::identity(p)).frobenius_norm());
    }
  }
  return worst;
}

TransformMatrix sampled_dual(const TransformMatrix& psi_matrix, int samples, int truncation) {
  const MDParams& prm = psi_matrix.params;
  const auto p = static_cast<std::size_t>(prm.p());
  const auto q = static_cast<std::size_t>(prm.q());
  TransformMatrix dual{prm, psi_matrix.n, std::vector<LaurentMatrix>(psi_matrix.cells.size())};
  parallel_for(psi_matrix.cells.size(), [&](std::size_t c) {
    const std::size_t degrees = static_cast<std::size_t>(2 * truncation + 1);
    std::vector<std::vector<Complex>> coeffs(q * p, std::vector<Complex>(degrees));
    for (int k = 0; k < samples; ++k) {
      const double xi = static_cast<double>(k) / samples;
      const CMatrix psi = psi_matrix.cells[c].eval_at(xi);
      const CMatrix dl = psi * pinv_at(psi).inverse;
      for (std::size_t e = 0; e < q * p; ++e) {
        const Complex v = dl(e / p, e % p);
        for (int d = -truncation; d <= truncation; ++d) {
          // coefficient of z^d: mean of v e^{-2 pi i d xi}
          const long long turns = (static_cast<long long>(d) * k) % samples;
          const double phase = -2.0 * std::numbers::pi * static_cast<double>(turns) / samples;
          coeffs[e][static_cast<std::size_t>(d + truncation)] += v * std::polar(1.0, phase);
        }
      }
    }
    double scale = 0.0;
    for (auto& row : coeffs)
      for (auto& x : row) {
        x /= static_cast<double>(samples);
        scale = std::max(scale, std::abs(x));
      }
    LaurentMatrix m(q, p);
    for (std::size_t e = 0; e < q * p; ++e) {
      // the sampled sums carry rounding noise of order eps * scale in every degree
      for (auto& x : coeffs[e])
        if (std::abs(x) < kDualNoiseFloor * scale) x = 0.0;
      m(e / p, e % p) = LaurentPoly::from_coeffs(-truncation, std::move(coeffs[e]));
    }
    dual.cells[c] = std::move(m);
  });
  return dual;
}

}  // namespace

DualResult dual_window(const TransformMatrix& psi_matrix, int samples, int truncation) {
  const MDParams& prm = psi_matrix.params;
  if (prm.q() > 1)
    throw Error(ErrorCode::NoMdDual,
                "for q > 1 the identity Psi~^T conj(Psi) = I cannot hold on all of [1, b) for any window");
  if (samples < 16 || !is_power_of_two(samples) || truncation < 1)
    throw Error(ErrorCode::InvalidArgument, "dual needs K a power of two >= 16 and J >= 1");
  if (!frame_bounds(psi_matrix).frame) throw Error(ErrorCode::NotAFrame, "window does not generate a frame");

  int k = std::min(samples, kMaxDualSamples);
  int j = std::min(truncation, kMaxDualTruncation);
  for (;;) {
    k = std::min(std::max(k, 4 * j), kMaxDualSamples);
    const TransformMatrix dual = sampled_dual(psi_matrix, k, j);
    const double residual = identity_residual(psi_matrix, dual);
    const bool converged = residual <= kDualIdentityTolerance;
    if (converged || (k >= kMaxDualSamples && j >= kMaxDualTruncation))
      return DualResult{window_from_matrix(dual), k, j, residual, converged};
    k = std::min(2 * k, kMaxDualSamples);
    j = std::min(2 * j, kMaxDualTruncation);
  }
}

Analysis analyze(const TransformMatrix& psi_matrix, int samples, bool keep_profiles) {
  const MDParams& prm = psi_matrix.params;
  Analysis out;
  FrameVerdict& v = out.verdict;
  v.density_ok = prm.p() <= prm.q();
  const CompletenessResult comp = completeness(psi_matrix);
  v.complete = comp.complete;
  v.failure_cells = comp.failure_cells;
  FrameBounds fb = frame_bounds(psi_matrix, samples, keep_profiles);
  v.frame = fb.frame && v.complete;
  v.a_est = fb.a_est;
  v.b_est = fb.b_est;
  v.bound_gap = prm.bound_gap();
  v.tight_possible = prm.p() == 1 && prm.q() == 1;
  v.k_final = fb.spectrum.samples;
  v.converged = fb.spectrum.converged;
  out.spectrum = std::move(fb.spectrum);
  return out;
}

TightnessReport tightness_check(const FrameVerdict& verdict, const MDParams& params) {
  TightnessReport t;
  t.tight_possible = params.p() == 1 && params.q() == 1;
  t.required_ratio = params.bound_gap();
  t.ratio = verdict.a_est > 0.0 ? verdict.b_est / verdict.a_est : HUGE_VAL;
  t.gap_holds = verdict.b_est >= params.bound_gap() * verdict.a_est - 1e-8;
  return t;
}

}  // namespace mdframe

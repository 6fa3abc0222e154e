// mdframe: batch front end for dilation-and-modulation frame computations.
//
// Exit codes: 0 pass, 1 identity failure, 2 input error, 3 convergence warning.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "mdframe/error.hpp"
#include "mdframe/io.hpp"

#ifndef MDFRAME_VERSION
#define MDFRAME_VERSION "0.0.0"
#endif

using namespace mdframe;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitIdentity = 1;
constexpr int kExitInput = 2;
constexpr int kExitConvergence = 3;

struct RunConfig {
  std::string subcommand;
  std::string input;
  std::string signal;
  std::string output;
  std::string dump_psi;
  std::string dump_eigs;
  double delta = 2.0;
  int p = 1;
  int q = 1;
  int n_cells = 4;
  int xi_samples = 256;
  int fourier_trunc = 32;
  std::int64_t m_max = 64;
  double tol = 1e-8;
  std::uint64_t seed = 42;
  int trials = 20;
};

Json config_to_json(const RunConfig& c) {
  Json j;
  j["subcommand"] = c.subcommand;
  if (!c.input.empty()) j["input"] = c.input;
  if (!c.signal.empty()) j["signal"] = c.signal;
  if (!c.output.empty()) j["output"] = c.output;
  if (!c.dump_psi.empty()) j["dump_psi"] = c.dump_psi;
  if (!c.dump_eigs.empty()) j["dump_eigs"] = c.dump_eigs;
  j["delta"] = format_double(c.delta);
  j["p"] = c.p;
  j["q"] = c.q;
  j["n_cells"] = c.n_cells;
  j["xi_samples"] = c.xi_samples;
  j["fourier_trunc"] = c.fourier_trunc;
  j["m_max"] = c.m_max;
  j["tol"] = c.tol;
  j["seed"] = c.seed;
  j["trials"] = c.trials;
  return j;
}

Json report_header(const RunConfig& c) {
  Json j;
  j["tool"] = "mdframe";
  j["version"] = MDFRAME_VERSION;
  j["config"] = config_to_json(c);
  return j;
}

void emit(const RunConfig& c, const Json& report) {
  const std::string text = report.dump(2) + "\n";
  if (c.output.empty()) {
    std::cout << text;
  } else {
    write_text_file(c.output, text);
  }
}

void validate_knobs(const RunConfig& c) {
  auto power_of_two = [](int k) { return k > 0 && (k & (k - 1)) == 0; };
  if (c.n_cells < 1) throw Error(ErrorCode::InvalidArgument, "--n-cells must be positive");
  if (!power_of_two(c.xi_samples) || c.xi_samples < 16 || c.xi_samples > kMaxXiSamples)
    throw Error(ErrorCode::InvalidArgument, "--xi-samples must be a power of two in [16, 4096]");
  if (c.fourier_trunc < 1) throw Error(ErrorCode::InvalidArgument, "--fourier-trunc must be positive");
  if (c.m_max < 1) throw Error(ErrorCode::InvalidArgument, "--m-max must be positive");
  if (!(c.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "--tol must be positive");
  if (c.trials < 1) throw Error(ErrorCode::InvalidArgument, "--trials must be positive");
}

// File-driven subcommands report the parameters they actually ran with.
void adopt(RunConfig& c, const MDParams& prm, int n) {
  c.delta = prm.delta();
  c.p = prm.p();
  c.q = prm.q();
  c.n_cells = n;
}

Json verdict_to_json(const FrameVerdict& v) {
  Json j;
  j["density_ok"] = v.density_ok;
  j["complete"] = v.complete;
  j["frame"] = v.frame;
  j["A_est"] = v.a_est;
  j["B_est"] = v.b_est;
  j["bound_gap"] = v.bound_gap;
  j["tight_possible"] = v.tight_possible;
  j["failure_cells"] = v.failure_cells;
  j["K_final"] = v.k_final;
  j["converged"] = v.converged;
  return j;
}

int cmd_params(const RunConfig& c) {
  const MDParams prm = derive_params(c.delta, c.p, c.q);
  Json rep = report_header(c);
  rep["params"] = params_to_json(prm);
  if (c.p > 1 && c.q > 1) {
    const BezoutPair bz = unique_bezout(c.p, c.q);
    rep["bezout"] = {{"r_prime", bz.r_prime}, {"s_prime", bz.s_prime}};
  } else {
    rep["bezout"] = "not-applicable";
  }
  const ResidueMap res = residue_bijection(c.p, c.q);
  Json table = Json::array();
  for (int r = 0; r < c.q; ++r)
    for (int s = 0; s < c.p; ++s) table.push_back({{"r", r}, {"s", s}, {"residue", res.forward(r, s)}});
  rep["residue_bijection"] = std::move(table);
  const PartitionCertificate cert = partition_certificate(c.p, c.q);
  Json intervals = Json::array();
  for (const auto& iv : cert.intervals)
    intervals.push_back({{"r", iv.r}, {"s", iv.s}, {"lo", iv.num_lo}, {"hi", iv.num_hi}, {"denom", iv.denom}});
  rep["partition"] = {{"intervals", std::move(intervals)},
                      {"disjoint", cert.disjoint},
                      {"covers_unit_interval", cert.covers_unit_interval}};
  rep["density_ok"] = density_verdict(c.p, c.q);
  rep["tight_possible"] = c.p == 1 && c.q == 1;
  emit(c, rep);
  return kExitPass;
}

int cmd_synthesize(RunConfig c) {
  const SynthesisSpec spec = synthesis_spec_from_json(read_json_file(c.input));
  adopt(c, spec.params, spec.n);
  const SynthesisResult res = synthesize(spec, c.xi_samples);
  if (c.output.empty()) throw Error(ErrorCode::InvalidArgument, "synthesize needs -o for the window file");
  write_text_file(c.output, window_to_json(res.psi).dump(2) + "\n");
  Json rep = report_header(c);
  rep["params"] = params_to_json(spec.params);
  rep["N"] = spec.n;
  rep["predicted"] = {{"complete", res.prediction.complete},
                      {"frame", res.prediction.frame},
                      {"A", res.prediction.a_pred},
                      {"B", res.prediction.b_pred},
                      {"vanishing_cells", res.prediction.vanishing_cells}};
  rep["window_cells"] = {{"i_min", res.psi.i_min()}, {"i_max", res.psi.i_max()}};
  std::cout << rep.dump(2) << "\n";
  return kExitPass;
}

int cmd_analyze(RunConfig c) {
  const StepFunction psi = window_from_json(read_json_file(c.input));
  adopt(c, psi.params(), psi.n());
  const TransformMatrix t = transform_matrix(psi);
  const Analysis an = analyze(t, c.xi_samples, !c.dump_eigs.empty());
  if (!c.dump_psi.empty()) write_text_file(c.dump_psi, transform_matrix_to_json(t).dump(2) + "\n");
  if (!c.dump_eigs.empty()) {
    std::ostringstream csv;
    write_eigen_csv(csv, an.spectrum);
    write_text_file(c.dump_eigs, csv.str());
  }
  Json rep = report_header(c);
  rep["params"] = params_to_json(t.params);
  rep["verdict"] = verdict_to_json(an.verdict);
  rep["spectrum"] = {{"lambda_min_global", an.spectrum.lambda_min_global},
                     {"lambda_max_global", an.spectrum.lambda_max_global},
                     {"K_history", an.spectrum.k_history},
                     {"min_history", an.spectrum.min_history},
                     {"max_history", an.spectrum.max_history}};
  if (an.verdict.frame) {
    const TightnessReport tr = tightness_check(an.verdict, t.params);
    rep["tightness"] = {{"gap_holds", tr.gap_holds}, {"ratio", tr.ratio}, {"required_ratio", tr.required_ratio}};
  }
  emit(c, rep);
  return an.verdict.converged ? kExitPass : kExitConvergence;
}

int cmd_coeffs(RunConfig c) {
  const StepFunction psi = window_from_json(read_json_file(c.input));
  adopt(c, psi.params(), psi.n());
  const StepFunction f = window_from_json(read_json_file(c.signal));
  if (!(psi.params() == f.params())) throw Error(ErrorCode::InvalidArgument, "window and signal use different (delta, p, q)");
  const AnalysisReport rep = analysis_coefficients(f, psi, c.m_max, c.tol);

  std::ostringstream csv;
  csv << "m,j,re,im,route_discrepancy\n";
  for (const auto& e : rep.coefficients)
    csv << e.m << ',' << e.j << ',' << format_double(e.time_domain.real()) << ','
        << format_double(e.time_domain.imag()) << ',' << format_double(e.discrepancy) << '\n';

  Json summary = report_header(c);
  summary["truncated_total"] = rep.truncated_total;
  summary["exact_total"] = rep.exact_total;
  summary["relative_gap"] = rep.relative_gap;
  summary["m_max_final"] = rep.m_max_final;
  summary["max_route_discrepancy"] = rep.max_discrepancy;
  summary["converged"] = rep.converged;
  if (c.output.empty()) {
    std::cout << csv.str();
    std::cerr << summary.dump(2) << "\n";
  } else {
    write_text_file(c.output, csv.str());
    std::cout << summary.dump(2) << "\n";
  }
  return rep.converged ? kExitPass : kExitConvergence;
}

struct Check {
  std::string name;
  double residual;
  double threshold;
  bool applicable = true;
};

double lambda_gram_residual(const MDParams& prm, int n) {
  const GeoGrid base{prm, n, 0, static_cast<CellIndex>(prm.q()) * n};
  double worst = 0.0;
  for (int m = -8; m <= 8; ++m)
    for (int m2 = -8; m2 <= 8; ++m2) {
      Complex s = 0.0;
      for (CellIndex i = 0; i < base.i_max; ++i) s += lambda_product_integral(m, m2, i, base);
      worst = std::max(worst, std::abs(s - (m == m2 ? 1.0 : 0.0)));
    }
  return worst;
}

int cmd_verify(RunConfig c) {
  const StepFunction psi = window_from_json(read_json_file(c.input));
  adopt(c, psi.params(), psi.n());
  const MDParams& prm = psi.params();
  const TransformMatrix t = transform_matrix(psi);
  const double norm_sq = psi.norm_sq();
  auto rel = [&](double x) { return norm_sq > 0.0 ? std::abs(x - norm_sq) / norm_sq : std::abs(x); };
  double scale = 1.0;
  for (Complex v : psi.values()) scale = std::max(scale, std::abs(v));

  std::vector<Check> checks;
  checks.push_back({"lambda_orthonormality", lambda_gram_residual(prm, psi.n()), 1e-12});
  checks.push_back({"theta_unitarity", rel(field_norm_sq(theta(psi))), 1e-12});
  checks.push_back({"gamma_unitarity", rel(field_norm_sq(gamma(psi))), 1e-12});
  double qp = 0.0;
  for (int j = -4; j <= 4; ++j)
    for (int m = -4; m <= 4; ++m) qp = std::max(qp, check_quasi_periodicity(psi, j, m));
  checks.push_back({"quasi_periodicity", qp, 1e-13});
  const RecurrenceResiduals rr = check_recurrences(t);
  checks.push_back({"recurrence_dilation_a", rr.dilation_by_a, 1e-12});
  if (rr.dilation_by_delta) {
    checks.push_back({"recurrence_dilation_delta", *rr.dilation_by_delta, 1e-12});
  } else {
    checks.push_back({"recurrence_dilation_delta", 0.0, 1e-12, false});
  }
  checks.push_back({"bounds_consistency", bounds_consistency(t, c.xi_samples).residual, 1e-6});
  checks.push_back({"round_trip_theta", max_cell_error(theta_inverse(theta(psi)), psi) / scale, 1e-13});
  checks.push_back({"round_trip_matrix", max_cell_error(window_from_matrix(t), psi) / scale, 1e-13});

  Json rep = report_header(c);
  rep["params"] = params_to_json(prm);
  Json list = Json::array();
  std::vector<std::string> failed;
  for (const auto& ch : checks) {
    Json j;
    j["identity"] = ch.name;
    if (!ch.applicable) {
      j["status"] = "not-applicable";
    } else {
      const bool ok = ch.residual < ch.threshold;
      j["residual"] = ch.residual;
      j["threshold"] = ch.threshold;
      j["status"] = ok ? "pass" : "fail";
      if (!ok) failed.push_back(ch.name);
    }
    list.push_back(std::move(j));
  }
  rep["identities"] = std::move(list);
  rep["failed"] = failed;
  emit(c, rep);
  if (!failed.empty()) {
    std::cerr << "failed identities:";
    for (const auto& f : failed) std::cerr << ' ' << f;
    std::cerr << "\n";
    return kExitIdentity;
  }
  return kExitPass;
}

int cmd_density(const RunConfig& c) {
  const MDParams prm = derive_params(c.delta, c.p, c.q);
  const bool ok = density_verdict(c.p, c.q);
  Json rep = report_header(c);
  rep["params"] = params_to_json(prm);
  rep["density_ok"] = ok;
  bool demonstrated = false;
  if (ok) {
    const SynthesisResult res = synthesize(witness_spec(prm, c.n_cells), c.xi_samples);
    const Analysis an = analyze(res.psi_matrix, c.xi_samples);
    const TightnessReport tr = tightness_check(an.verdict, prm);
    demonstrated = an.verdict.frame && tr.gap_holds && tr.ratio >= tr.required_ratio * (1.0 - 1e-9);
    rep["witness"] = {{"verdict", verdict_to_json(an.verdict)},
                      {"ratio_B_over_A", tr.ratio},
                      {"required_ratio", tr.required_ratio},
                      {"verified", demonstrated}};
  } else {
    std::mt19937_64 rng(c.seed);
    const CellIndex span = static_cast<CellIndex>(c.p) * c.q * c.n_cells;
    Json table = Json::array();
    int incomplete = 0;
    for (int t = 0; t < c.trials; ++t) {
      const StepFunction psi = random_window(prm, c.n_cells, -span, 2 * span, rng);
      const CompletenessResult comp = completeness(transform_matrix(psi));
      if (!comp.complete) ++incomplete;
      table.push_back({{"trial", t}, {"complete", comp.complete}});
    }
    demonstrated = incomplete == c.trials;
    rep["trials"] = std::move(table);
    rep["incomplete"] = std::to_string(incomplete) + "/" + std::to_string(c.trials);
  }
  rep["demonstrated"] = demonstrated;
  emit(c, rep);
  return demonstrated ? kExitPass : kExitIdentity;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::TailNotConverged:
    case ErrorCode::TruncationNotConverged:
      return kExitConvergence;
    default:
      return kExitInput;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dilation-and-modulation frame toolkit on L^2(R_+)"};
  app.set_version_flag("--version", MDFRAME_VERSION);
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_params = [&](CLI::App* sub) {
    sub->add_option("--delta", cfg.delta, "scale factor delta > 1 (a = delta^p, b = delta^q)");
    sub->add_option("--p", cfg.p, "dilation exponent p");
    sub->add_option("--q", cfg.q, "modulation exponent q");
  };
  auto add_knobs = [&](CLI::App* sub) {
    sub->add_option("--n-cells", cfg.n_cells, "cells per factor delta (N)");
    sub->add_option("--xi-samples", cfg.xi_samples, "initial xi-samples per cell (K)");
    sub->add_option("--fourier-trunc", cfg.fourier_trunc, "Laurent truncation for duals (J)");
    sub->add_option("--m-max", cfg.m_max, "initial modulation range |m| <= m_max");
    sub->add_option("--tol", cfg.tol, "relative tolerance");
    sub->add_option("--seed", cfg.seed, "seed for random windows");
    sub->add_option("-o", cfg.output, "output path");
  };

  auto* params = app.add_subcommand("params", "parameter, Bezout and tiling report");
  add_params(params);
  add_knobs(params);
  params->get_option("--delta")->required();
  params->get_option("--p")->required();
  params->get_option("--q")->required();

  auto* synth = app.add_subcommand("synthesize", "window from a (U, lambda, V) synthesis spec");
  synth->add_option("spec", cfg.input, "synthesis spec (JSON)")->required()->check(CLI::ExistingFile);
  add_knobs(synth);

  auto* analyze_cmd = app.add_subcommand("analyze", "completeness and frame-bound verdict for a window");
  analyze_cmd->add_option("window", cfg.input, "window file (JSON)")->required()->check(CLI::ExistingFile);
  analyze_cmd->add_option("--dump-psi", cfg.dump_psi, "write the transform matrix (JSON)");
  analyze_cmd->add_option("--dump-eigs", cfg.dump_eigs, "write eigenvalue profiles (CSV)");
  add_knobs(analyze_cmd);

  auto* coeffs = app.add_subcommand("coeffs", "coefficient table and Parseval summary");
  coeffs->add_option("window", cfg.input, "window file (JSON)")->required()->check(CLI::ExistingFile);
  coeffs->add_option("signal", cfg.signal, "signal file (JSON)")->required()->check(CLI::ExistingFile);
  add_knobs(coeffs);

  auto* verify = app.add_subcommand("verify", "structural identity suite for a window");
  verify->add_option("window", cfg.input, "window file (JSON)")->required()->check(CLI::ExistingFile);
  add_knobs(verify);

  auto* density = app.add_subcommand("density", "density theorem demonstration");
  add_params(density);
  add_knobs(density);
  density->add_option("--trials", cfg.trials, "random windows tried when p > q");
  density->get_option("--p")->required();
  density->get_option("--q")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  CLI::App* sub = app.get_subcommands().front();
  cfg.subcommand = sub->get_name();
  try {
    validate_knobs(cfg);
    if (sub == params) return cmd_params(cfg);
    if (sub == synth) return cmd_synthesize(cfg);
    if (sub == analyze_cmd) return cmd_analyze(cfg);
    if (sub == coeffs) return cmd_coeffs(cfg);
    if (sub == verify) return cmd_verify(cfg);
    return cmd_density(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

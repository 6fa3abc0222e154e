#include <catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "mdframe/error.hpp"
#include "mdframe/io.hpp"

using namespace mdframe;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an mdframe::Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("format_double round trips") {
  std::mt19937_64 rng(30);
  for (int t = 0; t < 200; ++t) {
    const double x = (uniform01(rng) - 0.5) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(std::stod(format_double(x)) == x);
  }
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(1.5) == "1.5");
}

TEST_CASE("window JSON round trip is bit exact") {
  std::mt19937_64 rng(31);
  const MDParams prm = derive_params(1.37, 2, 3);
  const StepFunction f = random_window(prm, 3, -7, 20, rng);
  const Json j = window_to_json(f);
  CHECK(j["delta"] == "1.37");
  const StepFunction g = window_from_json(Json::parse(j.dump()));
  CHECK(g.i_min() == f.i_min());
  CHECK(g.i_max() == f.i_max());
  CHECK(g.n() == 3);
  CHECK(g.params().p() == 2);
  CHECK(max_cell_error(f, g) == 0.0);
}

TEST_CASE("window parsing") {
  const Json numeric = Json::parse(R"({"delta": 2, "p": 1, "q": 1, "N": 1, "i_min": 0, "values": [[1, 0]]})");
  CHECK(window_from_json(numeric).params().delta() == 2.0);

  auto with = [&](const char* key, const Json& v) {
    Json j = numeric;
    j[key] = v;
    return j;
  };
  CHECK(code_of([&] { window_from_json(with("delta", "two")); }) == ErrorCode::Parse);
  CHECK(code_of([&] { window_from_json(with("delta", "0.5")); }) == ErrorCode::ScaleOutOfRange);
  CHECK(code_of([&] { window_from_json(with("N", 0)); }) == ErrorCode::Parse);
  Json shared = with("p", 2);
  shared["q"] = 4;
  CHECK(code_of([&] { window_from_json(shared); }) == ErrorCode::NonCoprime);
  CHECK(code_of([&] { window_from_json(with("values", Json::parse("[[1]]"))); }) == ErrorCode::Parse);
  CHECK(code_of([&] { window_from_json(with("values", "x")); }) == ErrorCode::Parse);
  Json missing = numeric;
  missing.erase("i_min");
  CHECK(code_of([&] { window_from_json(missing); }) == ErrorCode::Parse);
  CHECK(code_of([&] { window_from_json(with("p", "one")); }) == ErrorCode::Parse);
}

TEST_CASE("polynomial JSON") {
  const LaurentPoly p = LaurentPoly::monomial(-2, Complex(0.5, -1.0)) + LaurentPoly::monomial(3, 2.0);
  const LaurentPoly back = poly_from_json(poly_to_json(p));
  CHECK(coeff_distance(p, back) == 0.0);
  CHECK(poly_to_json(LaurentPoly()).empty());
  CHECK(coeff_distance(poly_from_json(Json(1.5)), LaurentPoly(1.5)) == 0.0);
  // repeated degrees accumulate
  CHECK(poly_from_json(Json::parse("[[1, 1, 0], [1, 2, 0]]")).coeff(1) == Complex(3.0));
  CHECK(code_of([] { poly_from_json(Json::parse("[[1, 1]]")); }) == ErrorCode::Parse);
  CHECK(code_of([] { poly_from_json(Json("x")); }) == ErrorCode::Parse);
}

TEST_CASE("synthesis spec formats") {
  const Json uniform = Json::parse(R"({"delta": "2", "p": 1, "q": 2, "N": 3,
      "uniform": {"lambdas": [[[0, 1.5, 0]]]}})");
  const SynthesisSpec s = synthesis_spec_from_json(uniform);
  REQUIRE(s.cells.size() == 3);
  for (const auto& c : s.cells) {
    CHECK(c.lambdas[0].coeff(0) == Complex(1.5));
    CHECK(coeff_distance(c.u, LaurentMatrix::identity(2)) == 0.0);
    CHECK(coeff_distance(c.v, LaurentMatrix::identity(1)) == 0.0);
  }

  const SynthesisSpec back = synthesis_spec_from_json(synthesis_spec_to_json(s));
  REQUIRE(back.cells.size() == 3);
  CHECK(back.n == 3);
  CHECK(coeff_distance(back.cells[1].lambdas[0], s.cells[1].lambdas[0]) == 0.0);

  Json short_cells = Json::parse(R"({"delta": "2", "p": 1, "q": 2, "N": 2,
      "cells": [{"lambdas": [1]}]})");
  CHECK(code_of([&] { synthesis_spec_from_json(short_cells); }) == ErrorCode::Parse);
  short_cells["N"] = 1;
  CHECK(synthesis_spec_from_json(short_cells).cells.size() == 1);
  short_cells["cells"][0]["U"] = Json::parse("[[1]]");
  CHECK(code_of([&] { synthesis_spec_from_json(short_cells); }) == ErrorCode::Parse);
  short_cells["cells"][0].erase("U");
  short_cells["cells"][0]["lambdas"] = Json::parse("[1, 1]");
  CHECK(code_of([&] { synthesis_spec_from_json(short_cells); }) == ErrorCode::Parse);
}

TEST_CASE("transform matrix dump") {
  const MDParams prm = derive_params(2.0, 1, 2);
  const Json j = transform_matrix_to_json(transform_matrix(StepFunction::indicator(prm, 2, 0, 2)));
  CHECK(j["N"] == 2);
  CHECK(j["params"]["q"] == 2);
  REQUIRE(j["cells"].size() == 2);
  CHECK(j["cells"][0]["entries"].size() == 2);
  CHECK(j["cells"][0]["entries"][0]["coeffs"] == Json::parse("[[0, 1.0, 0.0]]"));
  CHECK(j["cells"][0]["entries"][1]["coeffs"].empty());
}

TEST_CASE("eigenvalue CSV") {
  const MDParams prm = derive_params(2.0, 1, 1);
  const FrameBounds fb = frame_bounds(transform_matrix(StepFunction::indicator(prm, 2, 0, 2)), 16, true);
  std::ostringstream out;
  write_eigen_csv(out, fb.spectrum);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "cell_index,xi,lambda_1");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 2 * fb.spectrum.samples);
  CHECK(out.str().find("\n1,0.5,1\n") != std::string::npos);
}

TEST_CASE("files") {
  CHECK(code_of([] { read_json_file("/nonexistent/x.json"); }) == ErrorCode::Parse);
  const std::string path = "test_io_tmp.json";
  write_text_file(path, "{\"a\": ");
  CHECK(code_of([&] { read_json_file(path); }) == ErrorCode::Parse);
  write_text_file(path, "{\"a\": 1}");
  CHECK(read_json_file(path)["a"] == 1);
  std::remove(path.c_str());
}

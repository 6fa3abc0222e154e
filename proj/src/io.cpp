#include "mdframe/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "mdframe/error.hpp"

namespace mdframe {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

double parse_delta(const Json& v) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_string()) throw Error(ErrorCode::Parse, "delta must be a decimal string");
  const std::string s = v.get<std::string>();
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error(ErrorCode::Parse, "delta is not a decimal number: " + s);
  return x;
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::Parse, std::string("missing field '") + key + "'");
  return j.at(key);
}

template <typename T>
T get_as(const Json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("field '") + key + "': " + e.what());
  }
}

Complex complex_from_json(const Json& v) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw Error(ErrorCode::Parse, "complex values are [re, im] pairs");
  return {v[0].get<double>(), v[1].get<double>()};
}

MDParams params_from_json(const Json& j) {
  return derive_params(parse_delta(field(j, "delta")), get_as<int>(j, "p"), get_as<int>(j, "q"));
}

LaurentMatrix matrix_from_json(const Json& j, std::size_t n) {
  if (!j.is_array() || j.size() != n) throw Error(ErrorCode::Parse, "matrix has the wrong number of rows");
  LaurentMatrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    if (!j[r].is_array() || j[r].size() != n) throw Error(ErrorCode::Parse, "matrix has the wrong number of columns");
    for (std::size_t c = 0; c < n; ++c) m(r, c) = poly_from_json(j[r][c]);
  }
  return m;
}

Json matrix_to_json(const LaurentMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(poly_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

SynthesisCell cell_from_json(const Json& j, const MDParams& prm) {
  const auto p = static_cast<std::size_t>(prm.p());
  const auto q = static_cast<std::size_t>(prm.q());
  SynthesisCell cell;
  const Json& lambdas = field(j, "lambdas");
  if (!lambdas.is_array() || lambdas.size() != p) throw Error(ErrorCode::Parse, "lambdas must list p polynomials");
  for (const auto& l : lambdas) cell.lambdas.push_back(poly_from_json(l));
  cell.u = j.contains("U") ? matrix_from_json(j.at("U"), q) : LaurentMatrix::identity(q);
  cell.v = j.contains("V") ? matrix_from_json(j.at("V"), p) : LaurentMatrix::identity(p);
  return cell;
}

}  // namespace

Json params_to_json(const MDParams& params) {
  Json j;
  j["delta"] = format_double(params.delta());
  j["p"] = params.p();
  j["q"] = params.q();
  j["a"] = params.a();
  j["b"] = params.b();
  j["beta"] = params.beta();
  j["bound_gap"] = params.bound_gap();
  return j;
}

Json window_to_json(const StepFunction& f) {
  Json j;
  j["delta"] = format_double(f.params().delta());
  j["p"] = f.params().p();
  j["q"] = f.params().q();
  j["N"] = f.n();
  j["i_min"] = f.i_min();
  Json values = Json::array();
  for (Complex v : f.values()) values.push_back(Json::array({v.real(), v.imag()}));
  j["values"] = std::move(values);
  return j;
}

StepFunction window_from_json(const Json& j) {
  const MDParams prm = params_from_json(j);
  const int n = get_as<int>(j, "N");
  if (n < 1) throw Error(ErrorCode::Parse, "N must be positive");
  const auto i_min = get_as<std::int64_t>(j, "i_min");
  const Json& values = field(j, "values");
  if (!values.is_array()) throw Error(ErrorCode::Parse, "values must be an array");
  std::vector<Complex> v;
  v.reserve(values.size());
  for (const auto& x : values) v.push_back(complex_from_json(x));
  const auto i_max = i_min + static_cast<std::int64_t>(v.size());
  return StepFunction(GeoGrid{prm, n, i_min, i_max}, std::move(v));
}

Json poly_to_json(const LaurentPoly& poly) {
  Json out = Json::array();
  for (int d = poly.low_degree(); !poly.is_zero() && d <= poly.high_degree(); ++d) {
    const Complex c = poly.coeff(d);
    if (c != 0.0) out.push_back(Json::array({d, c.real(), c.imag()}));
  }
  return out;
}

LaurentPoly poly_from_json(const Json& j) {
  if (j.is_number()) return LaurentPoly(Complex(j.get<double>(), 0.0));
  if (!j.is_array()) throw Error(ErrorCode::Parse, "polynomials are arrays of [degree, re, im]");
  LaurentPoly out;
  for (const auto& term : j) {
    if (!term.is_array() || term.size() != 3 || !term[0].is_number_integer())
      throw Error(ErrorCode::Parse, "polynomial terms are [degree, re, im]");
    out += LaurentPoly::monomial(term[0].get<int>(), Complex(term[1].get<double>(), term[2].get<double>()));
  }
  return out;
}

SynthesisSpec synthesis_spec_from_json(const Json& j) {
  const MDParams prm = params_from_json(j);
  const int n = get_as<int>(j, "N");
  if (n < 1) throw Error(ErrorCode::Parse, "N must be positive");
  SynthesisSpec spec{prm, n, {}};
  if (j.contains("uniform")) {
    const SynthesisCell cell = cell_from_json(j.at("uniform"), prm);
    spec.cells.assign(static_cast<std::size_t>(n), cell);
  } else {
    const Json& cells = field(j, "cells");
    if (!cells.is_array() || cells.size() != static_cast<std::size_t>(n))
      throw Error(ErrorCode::Parse, "cells must list N entries");
    for (const auto& c : cells) spec.cells.push_back(cell_from_json(c, prm));
  }
  return spec;
}

Json synthesis_spec_to_json(const SynthesisSpec& spec) {
  Json j;
  j["delta"] = format_double(spec.params.delta());
  j["p"] = spec.params.p();
  j["q"] = spec.params.q();
  j["N"] = spec.n;
  Json cells = Json::array();
  for (const auto& c : spec.cells) {
    Json cell;
    Json lambdas = Json::array();
    for (const auto& l : c.lambdas) lambdas.push_back(poly_to_json(l));
    cell["lambdas"] = std::move(lambdas);
    cell["U"] = matrix_to_json(c.u);
    cell["V"] = matrix_to_json(c.v);
    cells.push_back(std::move(cell));
  }
  j["cells"] = std::move(cells);
  return j;
}

Json transform_matrix_to_json(const TransformMatrix& t) {
  Json j;
  j["params"] = params_to_json(t.params);
  j["N"] = t.n;
  Json cells = Json::array();
  for (std::size_t c = 0; c < t.cells.size(); ++c) {
    Json entries = Json::array();
    const LaurentMatrix& m = t.cells[c];
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t s = 0; s < m.cols(); ++s) {
        Json e;
        e["r"] = r;
        e["s"] = s;
        e["coeffs"] = poly_to_json(m(r, s));
        entries.push_back(std::move(e));
      }
    Json cell;
    cell["cell"] = c;
    cell["entries"] = std::move(entries);
    cells.push_back(std::move(cell));
  }
  j["cells"] = std::move(cells);
  return j;
}

void write_eigen_csv(std::ostream& out, const SpectralReport& report) {
  std::size_t width = 0;
  for (const auto& cell : report.profiles)
    for (const auto& ev : cell) width = std::max(width, ev.size());
  out << "cell_index,xi";
  for (std::size_t s = 1; s <= width; ++s) out << ",lambda_" << s;
  out << '\n';
  for (std::size_t c = 0; c < report.profiles.size(); ++c) {
    const auto& cell = report.profiles[c];
    for (std::size_t k = 0; k < cell.size(); ++k) {
      out << c << ',' << format_double(static_cast<double>(k) / static_cast<double>(cell.size()));
      for (double v : cell[k]) out << ',' << format_double(v);
      out << '\n';
    }
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Parse, "cannot write " + path);
  out << text;
}

}  // namespace mdframe

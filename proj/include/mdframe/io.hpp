#pragma once

// JSON window, synthesis-spec and transform-matrix formats, CSV dumps.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "mdframe/frames.hpp"

namespace mdframe {

using Json = nlohmann::ordered_json;

/// Shortest decimal string that parses back to the same double.
std::string format_double(double x);

Json params_to_json(const MDParams& params);

/// {delta, p, q, N, i_min, values: [[re, im], ...]}
Json window_to_json(const StepFunction& f);
StepFunction window_from_json(const Json& j);

/// [[degree, re, im], ...]
Json poly_to_json(const LaurentPoly& poly);
LaurentPoly poly_from_json(const Json& j);

/// {delta, p, q, N, cells: [{lambdas, U?, V?}, ...]} or with "uniform"
/// in place of "cells" to use one entry for every cell.
SynthesisSpec synthesis_spec_from_json(const Json& j);
Json synthesis_spec_to_json(const SynthesisSpec& spec);

/// {params, N, cells: [{cell, entries: [{r, s, coeffs}]}]}
Json transform_matrix_to_json(const TransformMatrix& t);

/// Rows cell_index, xi, lambda_1..lambda_p at the final sample count.
void write_eigen_csv(std::ostream& out, const SpectralReport& report);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace mdframe

#pragma once

// Text formats: complex literals, JSON documents for algebras, regions,
// clouds and hunt configs, and the `re,im` CSV point format.

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "snrlab/algebra.hpp"
#include "snrlab/geometry.hpp"
#include "snrlab/hunt.hpp"
#include "snrlab/snr.hpp"

namespace snrlab::io {

using Json = nlohmann::json;

// "re+imi" with optional sign, or the pure forms "2", "3i", "-i", "1-2i".
// No whitespace. Exponent notation is accepted in either part.
Complex parse_complex(std::string_view text);
// Comma-separated complex literals: "1+1i,2".
Element parse_element(std::string_view text);
std::string format_complex(Complex z);

// 17 significant digits, enough to round-trip a double.
std::string format_real(double x);

// Parses a JSON document; syntax errors become SpecError naming the line and
// column, prefixed by `what` (usually a file name).
Json parse_json(std::string_view text, std::string_view what = "json");
std::string read_file(const std::string& path);

Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j, const std::string& field);
Json points_to_json(const std::vector<Complex>& points);
std::vector<Complex> points_from_json(const Json& j, const std::string& field);

Json exponent_to_json(const Exponent& p);
Exponent exponent_from_json(const Json& j, const std::string& field);

// { "dim", "tensor": tensor[k][i][j] = [re, im], "norm", "identity"? }.
// A norm is {"p", "weights", "scale"} or {"blocks": [norm, ...]}.
Json algebra_to_json(const AlgebraSpec& algebra);
AlgebraSpec algebra_from_json(const Json& j);

// Tagged by "kind": point, segment, disk, minkowski, finite_hull, param.
Json region_to_json(const Region& region);
Region region_from_json(const Json& j);

// { "meta": {...}, "points": [[re, im], ...] }.
Json cloud_to_json(const PointCloud& cloud);
PointCloud cloud_from_json(const Json& j);

std::string points_to_csv(const std::vector<Complex>& points);
// Header `re,im` then one point per line; errors name the line.
std::vector<Complex> points_from_csv(std::string_view text);

// Unknown keys are rejected so typos do not silently fall back to defaults.
Json hunt_config_to_json(const HuntConfig& config);
HuntConfig hunt_config_from_json(const Json& j);

}  // namespace snrlab::io

#pragma once

// JSON descriptors for fields, forms, matrices and points, plus the report
// envelope shared by the command-line tool.
//
// Rationals are integers or strings "p/q". A K element is [a, b] meaning
// a + b*omega; an F element is [xa, xb, ya, yb] in the basis
// (1, omega, rho, omega*rho), or a single rational. Complex numbers are
// plain numbers or [re, im].

#include <string>
#include <string_view>

#include "json.hpp"

#include "cmball/hermitian.hpp"

namespace cmball::io {

using nlohmann::json;

/// Reads and parses a JSON file; ParseError on any failure.
json load_json(const std::string& path);

Rational parse_rational(const json& j);
/// {"D": 5, "alpha": -11} or {"D": 5, "alpha": [a, b]}.
CMField parse_field(const json& j);
FieldElement parse_element(const json& j, const CMField& F);
ExactVec parse_exact_vector(const json& j, const CMField& F);
ExactMat parse_exact_matrix(const json& j, const CMField& F);
/// Accepts a bare 3x3 array or an object with key `key`.
ExactForm parse_exact_form(const json& j, const CMField& F);

Complex parse_complex(const json& j);
Vec3 parse_complex_vector(const json& j);
Mat3 parse_complex_matrix(const json& j);
HermitianForm parse_form(const json& j);

/// Unwraps {key: value} when present, else returns j itself.
const json& unwrap(const json& j, const char* key);

json to_json(const Rational& q);
json to_json(const KElement& x);
json to_json(const FieldElement& x);
json to_json(const ExactMat& m);
json to_json(Complex z);
json to_json(const Vec3& v);
json to_json(const Mat3& m);

/// 64-bit FNV-1a as 16 lowercase hex digits.
std::string fnv1a64(std::string_view data);

/// Serialization used for reports: sorted keys, two-space indent, trailing newline.
std::string dump(const json& j);

}  // namespace cmball::io

#include "cmball/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cmball/errors.hpp"

namespace cmball::io {

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

const json& unwrap(const json& j, const char* key) {
  if (j.is_object() && j.contains(key)) return j.at(key);
  return j;
}

Rational parse_rational(const json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s.empty() || s.find_first_not_of("0123456789-/+") != std::string::npos) {
      throw ParseError("not a rational: " + s);
    }
    Rational q;
    if (q.set_str(s[0] == '+' ? s.substr(1) : s, 10) != 0) throw ParseError("not a rational: " + s);
    if (q.get_den() == 0) throw ParseError("zero denominator: " + s);
    q.canonicalize();
    return q;
  }
  throw ParseError("expected an integer or a \"p/q\" string, got " + j.dump());
}

CMField parse_field(const json& j0) {
  const json& j = unwrap(j0, "field");
  if (!j.is_object() || !j.contains("D") || !j.contains("alpha")) {
    throw ParseError("field descriptor needs D and alpha");
  }
  if (!j.at("D").is_number_integer()) throw ParseError("D must be an integer");
  long D = j.at("D").get<long>();
  const json& a = j.at("alpha");
  if (a.is_array()) {
    if (a.size() != 2) throw ParseError("alpha must be [a, b]");
    return CMField(D, parse_rational(a[0]), parse_rational(a[1]));
  }
  return CMField(D, parse_rational(a), 0);
}

FieldElement parse_element(const json& j, const CMField& F) {
  if (j.is_array()) {
    if (j.size() != 4) throw ParseError("field element must be [xa, xb, ya, yb]");
    return F.element(parse_rational(j[0]), parse_rational(j[1]), parse_rational(j[2]),
                     parse_rational(j[3]));
  }
  return F.element(parse_rational(j));
}

ExactVec parse_exact_vector(const json& j, const CMField& F) {
  if (!j.is_array() || j.size() != 3) throw ParseError("expected a 3-vector");
  return {parse_element(j[0], F), parse_element(j[1], F), parse_element(j[2], F)};
}

ExactMat parse_exact_matrix(const json& j0, const CMField& F) {
  const json& j = unwrap(j0, "matrix");
  if (!j.is_array() || j.size() != 3) throw ParseError("expected a 3x3 matrix");
  ExactMat m;
  for (int r = 0; r < 3; ++r) {
    if (!j[r].is_array() || j[r].size() != 3) throw ParseError("expected a 3x3 matrix");
    for (int c = 0; c < 3; ++c) m(r, c) = parse_element(j[r][c], F);
  }
  return m;
}

ExactForm parse_exact_form(const json& j, const CMField& F) {
  const json& inner = unwrap(j, "form");
  return ExactForm(F, parse_exact_matrix(unwrap(inner, "J"), F));
}

Complex parse_complex(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ParseError("expected a number or [re, im], got " + j.dump());
}

Vec3 parse_complex_vector(const json& j) {
  if (!j.is_array() || j.size() != 3) throw ParseError("expected a complex 3-vector");
  return Vec3(parse_complex(j[0]), parse_complex(j[1]), parse_complex(j[2]));
}

Mat3 parse_complex_matrix(const json& j0) {
  const json& j = unwrap(j0, "matrix");
  if (!j.is_array() || j.size() != 3) throw ParseError("expected a complex 3x3 matrix");
  Mat3 m;
  for (int r = 0; r < 3; ++r) {
    if (!j[r].is_array() || j[r].size() != 3) throw ParseError("expected a complex 3x3 matrix");
    for (int c = 0; c < 3; ++c) m(r, c) = parse_complex(j[r][c]);
  }
  return m;
}

HermitianForm parse_form(const json& j) {
  return HermitianForm(parse_complex_matrix(unwrap(unwrap(j, "form"), "J")));
}

json to_json(const Rational& q) {
  if (q.get_den() == 1 && q.get_num().fits_slong_p()) return q.get_num().get_si();
  return q.get_str();
}

json to_json(const KElement& x) { return json::array({to_json(x.a()), to_json(x.b())}); }

json to_json(const FieldElement& x) {
  json out = json::array();
  for (const Rational& c : x.coordinates()) out.push_back(to_json(c));
  return out;
}

json to_json(const ExactMat& m) {
  json out = json::array();
  for (int r = 0; r < 3; ++r) {
    json row = json::array();
    for (int c = 0; c < 3; ++c) row.push_back(to_json(m(r, c)));
    out.push_back(row);
  }
  return out;
}

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json to_json(const Vec3& v) { return json::array({to_json(v(0)), to_json(v(1)), to_json(v(2))}); }

json to_json(const Mat3& m) {
  json out = json::array();
  for (int r = 0; r < 3; ++r) {
    json row = json::array();
    for (int c = 0; c < 3; ++c) row.push_back(to_json(m(r, c)));
    out.push_back(row);
  }
  return out;
}

std::string fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace cmball::io

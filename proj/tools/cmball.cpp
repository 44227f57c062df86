// Command-line front end. Every report is a JSON object carrying the tool
// version and a hash of the normalized inputs; no timestamps, so reruns are
// byte-identical.
//
// Exit status: 0 success, 2 malformed input, 3 mathematical rejection,
// 4 numerically inconclusive.

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "cmball/errors.hpp"
#include "cmball/hodge.hpp"
#include "cmball/io.hpp"
#include "cmball/isometry.hpp"
#include "cmball/kahler.hpp"
#include "cmball/lattice.hpp"

#ifndef CMBALL_VERSION
#define CMBALL_VERSION "0.0.0"
#endif

using namespace cmball;
using io::json;

namespace {

constexpr int kParse = 2, kMath = 3, kNumeric = 4;

/// Collects normalized inputs for the hash and writes the envelope.
class Report {
 public:
  explicit Report(std::string command) : command_(std::move(command)) {}

  json file(const std::string& role, const std::string& path) {
    json j = io::load_json(path);
    inputs_[role] = j.dump();
    return j;
  }
  template <class T>
  void param(const std::string& name, const T& value) {
    std::ostringstream os;
    os << value;
    inputs_["param:" + name] = os.str();
  }

  json envelope(json result) const {
    std::string blob = command_ + "\n";
    for (const auto& [k, v] : inputs_) blob += k + "=" + v + "\n";
    return json{{"tool", "cmball"},
                {"version", CMBALL_VERSION},
                {"command", command_},
                {"input_hash", io::fnv1a64(blob)},
                {"result", std::move(result)}};
  }

 private:
  std::string command_;
  std::map<std::string, std::string> inputs_;
};

void emit(const json& j, const std::string& out) {
  std::string text = io::dump(j);
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw ParseError("cannot write " + out);
  f << text;
}

json locus_json(const FixedLocus& l) {
  json j{{"kind", to_string(l.kind)}};
  if (l.kind != LocusKind::WholeBall) j["primary"] = io::to_json(l.primary);
  if (l.kind == LocusKind::BoundaryPair) j["secondary"] = io::to_json(l.secondary);
  return j;
}

json class_json(const IsometryClass& c) {
  json ev = json::array();
  for (Complex z : c.eigenvalues) ev.push_back(io::to_json(z));
  return json{{"label", to_string(c.label)}, {"eigenvalues", ev}, {"f", c.f},
              {"locus", locus_json(c.locus)}};
}

json datum_json(const TorsionDatum& d) {
  return json{{"matrix", io::to_json(d.element)}, {"trace", io::to_json(d.trace)},
              {"order", d.order},                 {"label", to_string(d.label)},
              {"triple", d.triple},               {"locus", locus_json(d.locus)}};
}

ArithmeticLattice lattice_from(Report& rep, const std::string& field_path,
                               const std::string& form_path, CMField& F) {
  F = io::parse_field(rep.file("field", field_path));
  ExactForm J = form_path.empty() ? diagonal_sqrtD_form(F)
                                  : io::parse_exact_form(rep.file("form", form_path), F);
  return ArithmeticLattice(F, J);
}

CurvePatch curve_from(Report& rep, const std::string& name, int k, const std::string& coeffs) {
  rep.param("curve", name);
  if (name == "line") return line_curve();
  if (name == "graph") {
    rep.param("k", k);
    return graph_curve(k);
  }
  if (name == "cusp") return cusp_curve();
  if (name == "reparametrized-line") return reparametrized_line_curve();
  if (name == "polynomial") {
    if (coeffs.empty()) throw ParseError("polynomial curve needs --coeffs");
    json j = rep.file("coeffs", coeffs);
    if (!j.contains("z") || !j.contains("w")) throw ParseError("coeffs need z and w arrays");
    std::vector<Complex> z, w;
    for (const auto& c : j.at("z")) z.push_back(io::parse_complex(c));
    for (const auto& c : j.at("w")) w.push_back(io::parse_complex(c));
    return polynomial_curve(z, w);
  }
  throw ParseError("unknown curve " + name);
}

json pullback_json(const PullbackResult& p) {
  return json{{"value", p.value},
              {"error", p.error},
              {"cells", p.cells},
              {"converged", p.converged},
              {"star_shaped", p.star_shaped}};
}

const char* step_name(StepKind k) {
  switch (k) {
    case StepKind::Increase: return "increase";
    case StepKind::Flat: return "flat";
    case StepKind::Decrease: return "decrease";
  }
  return "?";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Complex hyperbolic lattices over CM fields: classification, volumes, certificates"};
  app.set_version_flag("--version", std::string(CMBALL_VERSION));
  app.require_subcommand(1);
  std::string out;
  app.add_option("-o,--out", out, "write the report here instead of stdout");

  // classify
  auto* classify = app.add_subcommand("classify", "classify an element of SU(J)");
  std::string c_matrix, c_form, c_field;
  classify->add_option("--matrix", c_matrix, "3x3 matrix JSON")->required();
  classify->add_option("--form", c_form, "Hermitian form JSON (default diag(1,1,-1))");
  classify->add_option("--field", c_field, "field JSON; switches to exact arithmetic");

  // dist
  auto* dist = app.add_subcommand("dist", "distances between points and complex lines");
  std::string d_input;
  dist->add_option("--input", d_input,
                   "JSON with form (optional) and either p,q or p,line or line1,line2")
      ->required();

  // lattice
  auto* lattice = app.add_subcommand("lattice", "exact lattice operations");
  lattice->require_subcommand(1);
  std::string l_field, l_form, l_matrix;
  int l_cap = 1;
  bool l_serial = false;
  auto* l_check = lattice->add_subcommand("check", "membership of a matrix");
  auto* l_search = lattice->add_subcommand("search", "torsion elements up to a height cap");
  auto* l_certify = lattice->add_subcommand("certify", "pair certificates on the torsion set");
  for (auto* s : {l_check, l_search, l_certify}) {
    s->add_option("--field", l_field, "field JSON")->required();
    s->add_option("--form", l_form, "form JSON (default diag(1,1,-sqrt D))");
  }
  l_check->add_option("--matrix", l_matrix, "exact 3x3 matrix JSON")->required();
  for (auto* s : {l_search, l_certify}) {
    s->add_option("--cap", l_cap, "coefficient height cap")->check(CLI::Range(0, kMaxSearchCap));
    s->add_flag("--serial", l_serial, "use the serial reference search");
  }

  // volume curve
  auto* volume = app.add_subcommand("volume", "volumes of holomorphic curves");
  volume->require_subcommand(1);
  auto* v_curve = volume->add_subcommand("curve", "pull back forms along a curve patch");
  std::string v_name = "line", v_coeffs, v_measure = "ball", v_mode = "omegaF-tube";
  int v_k = 2, v_mult = 0;
  double v_r = 1.0, v_rel = 1e-4;
  std::size_t v_cells = 400000;
  std::vector<double> v_radii;
  v_curve->add_option("--curve", v_name, "line | graph | cusp | reparametrized-line | polynomial");
  v_curve->add_option("--k", v_k, "exponent for the graph curve");
  v_curve->add_option("--coeffs", v_coeffs, "JSON {z: [...], w: [...]} for polynomial curves");
  v_curve->add_option("--measure", v_measure, "ball | lelong | scan | stokes");
  v_curve->add_option("--r", v_r, "radius");
  v_curve->add_option("--radii", v_radii, "radius grid for lelong and scan");
  v_curve->add_option("--mode", v_mode, "scan mode: omegaF-tube | vol-tube | vol-ball");
  v_curve->add_option("--mult", v_mult, "multiplicity for the ball bound (default from curve)");
  v_curve->add_option("--rel-tol", v_rel, "quadrature relative tolerance")->check(CLI::PositiveNumber);
  v_curve->add_option("--max-cells", v_cells, "quadrature cell budget")->check(CLI::PositiveNumber);

  // certificate genus
  auto* cert = app.add_subcommand("certificate", "numeric certificates");
  cert->require_subcommand(1);
  auto* c_genus = cert->add_subcommand("genus", "volume bound for curves of genus g");
  int g_genus = 2;
  double g_sinh2 = 0;
  c_genus->add_option("--g", g_genus, "genus")->required();
  c_genus->add_option("--sinh2", g_sinh2, "sinh^2(r/2)")->required();

  // hodge build
  auto* hodge = app.add_subcommand("hodge", "Hodge structures");
  hodge->require_subcommand(1);
  auto* h_build = hodge->add_subcommand("build", "period matrix and polarization at a point");
  std::string h_v, h_field, h_form, h_alpha;
  h_build->add_option("--v", h_v, "complex 3-vector JSON, negative under sigma1")->required();
  h_build->add_option("--field", h_field, "field JSON")->required();
  h_build->add_option("--form", h_form, "form JSON (default diag(1,1,-sqrt D))");
  h_build->add_option("--alpha", h_alpha, "purely imaginary scalar JSON (default -rho or rho)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  try {
    if (*classify) {
      Report rep("classify");
      json mj = rep.file("matrix", c_matrix);
      json result;
      if (!c_field.empty()) {
        CMField F = io::parse_field(rep.file("field", c_field));
        if (c_form.empty()) throw ParseError("exact classification needs --form");
        ExactIsometry M(io::parse_exact_matrix(mj, F),
                        io::parse_exact_form(rep.file("form", c_form), F));
        IsometryClass c = cmball::classify(M);
        result = class_json(c);
        result["mode"] = "exact";
        result["trace"] = io::to_json(M.trace());
        KElement f = goldman_f(M.trace());
        result["f_exact"] = io::to_json(f);
        result["f_sign"] = f.sign(true);
      } else {
        HermitianForm J = c_form.empty() ? HermitianForm::standard()
                                         : io::parse_form(rep.file("form", c_form));
        Isometry M(io::parse_complex_matrix(mj), J);
        result = class_json(cmball::classify(M));
        result["mode"] = "numeric";
      }
      emit(rep.envelope(result), out);
      return 0;
    }

    if (*dist) {
      Report rep("dist");
      json j = rep.file("input", d_input);
      HermitianForm J = j.contains("form") ? io::parse_form(j.at("form")) : HermitianForm::standard();
      json result;
      if (j.contains("p") && j.contains("q")) {
        BallPoint p(io::parse_complex_vector(j.at("p")), J), q(io::parse_complex_vector(j.at("q")), J);
        result = {{"kind", "point_point"}, {"distance", distance(p, q)},
                  {"tance", tance(J, p.rep(), q.rep())}};
      } else if (j.contains("p") && j.contains("line")) {
        BallPoint p(io::parse_complex_vector(j.at("p")), J);
        ComplexLine l(io::parse_complex_vector(j.at("line")), J);
        result = {{"kind", "point_line"}, {"distance", dist_point_line(p, l)},
                  {"tanh2_half_distance", tanh2_half_distance(p, l)}};
      } else if (j.contains("line1") && j.contains("line2")) {
        ComplexLine a(io::parse_complex_vector(j.at("line1")), J);
        ComplexLine b(io::parse_complex_vector(j.at("line2")), J);
        LineRelation r = line_relation(a, b);
        result = {{"kind", "line_line"}, {"relation", to_string(r.kind)}, {"tance", r.tance}};
        if (r.kind == LineRelationKind::Ultraparallel) result["distance"] = r.distance;
        if (r.intersection) result["intersection"] = io::to_json(*r.intersection);
      } else {
        throw ParseError("dist input needs p and q, p and line, or line1 and line2");
      }
      emit(rep.envelope(result), out);
      return 0;
    }

    if (*lattice) {
      CMField F(5, -1, 0);
      if (*l_check) {
        Report rep("lattice check");
        ArithmeticLattice L = lattice_from(rep, l_field, l_form, F);
        ExactMat M = io::parse_exact_matrix(rep.file("matrix", l_matrix), F);
        MembershipResult m = is_member(L, M);
        json result{{"member", m.member}};
        if (!m.member) result["reason"] = m.reason;
        if (m.member) result["datum"] = datum_json(make_torsion_datum(L, M));
        emit(rep.envelope(result), out);
        return m.member ? 0 : kMath;
      }
      Report rep(*l_search ? "lattice search" : "lattice certify");
      ArithmeticLattice L = lattice_from(rep, l_field, l_form, F);
      rep.param("cap", l_cap);
      TorsionSearchResult s = l_serial ? torsion_search_serial(L, l_cap) : torsion_search(L, l_cap);
      json result{{"height_cap", s.height_cap},
                  {"columns_examined", s.columns_examined},
                  {"column_candidates", s.column_candidates},
                  {"members_found", s.members_found}};
      json els = json::array();
      for (const auto& d : s.elements) els.push_back(datum_json(d));
      result["elements"] = els;
      if (*l_certify) {
        json pairs = json::array();
        for (std::size_t a = 0; a < s.elements.size(); ++a) {
          for (std::size_t b = a + 1; b < s.elements.size(); ++b) {
            RepulsionCertificate c = pair_certificate(L, s.elements[a], s.elements[b]);
            json p{{"a", a},
                   {"b", b},
                   {"verdict", to_string(c.verdict)},
                   {"trace_product", io::to_json(c.trace_product)},
                   {"trichotomy_holds", c.trichotomy.holds},
                   {"note", c.note}};
            if (c.exact_tance) p["exact_tance"] = io::to_json(*c.exact_tance);
            if (c.common_point) p["common_point"] = io::to_json(*c.common_point);
            if (c.product_label) p["product_label"] = to_string(*c.product_label);
            if (c.verdict == PairVerdict::Ultraparallel || c.verdict == PairVerdict::Separated) {
              p["distance"] = c.distance;
            }
            if (c.witness) {
              p["witness"] = io::to_json(*c.witness);
              p["witness_gap_ok"] = c.witness_gap_ok;
            }
            pairs.push_back(p);
          }
        }
        result["pairs"] = pairs;
        LoxodromicFloor fl = loxodromic_floor(F.D());
        result["loxodromic_floor"] = {{"value", fl.value}, {"in_range", fl.in_range}};
      }
      emit(rep.envelope(result), out);
      return 0;
    }

    if (*volume) {
      Report rep("volume curve");
      CurvePatch C = curve_from(rep, v_name, v_k, v_coeffs);
      rep.param("measure", v_measure);
      json result{{"curve", C.family},
                  {"intersection_with_axis", C.intersection_with_axis},
                  {"multiplicity_at_origin", C.multiplicity_at_origin}};
      bool converged = true;
      if (v_measure == "ball") {
        rep.param("r", v_r);
        rep.param("rel_tol", v_rel);
        rep.param("max_cells", v_cells);
        QuadratureSpec q;
        q.rel_tol = v_rel;
        q.max_cells = v_cells;
        int mult = v_mult > 0 ? v_mult : C.multiplicity_at_origin;
        if (mult < 1) throw MathError("curve does not pass through the center; give --mult");
        PullbackResult p = pullback_integral(C, bergman_form, std_ball(v_r), q);
        double s = std::sinh(v_r / 2);
        double norm = 4 * std::numbers::pi * s * s * mult;
        converged = p.converged;
        result["volume"] = pullback_json(p);
        result["normalizer"] = norm;
        result["ratio"] = p.value / norm;
        result["bound_holds"] = p.value / norm >= 0.995;
      } else if (v_measure == "lelong") {
        std::vector<double> radii = v_radii.empty() ? std::vector<double>{0.2, 0.1, 0.05} : v_radii;
        for (double r : radii) rep.param("radius", r);
        LelongReport L = lelong_ratio(C, radii);
        result.update({{"radii", L.radii},
                       {"integrals", L.integrals},
                       {"errors", L.errors},
                       {"ratios", L.ratios},
                       {"limit", L.limit},
                       {"target", L.target},
                       {"relative_deviation", L.relative_deviation}});
      } else if (v_measure == "scan") {
        std::map<std::string, ScanMode> modes{{"omegaF-tube", ScanMode::OmegaFOverSinh2Tube},
                                              {"vol-tube", ScanMode::VolOverCosh2Tube},
                                              {"vol-ball", ScanMode::VolOverCosh2Ball}};
        if (!modes.count(v_mode)) throw ParseError("unknown scan mode " + v_mode);
        rep.param("mode", v_mode);
        std::vector<double> radii = v_radii;
        if (radii.empty())
          for (int i = 1; i <= 8; ++i) radii.push_back(0.2 * i);
        for (double r : radii) rep.param("radius", r);
        MonotonicityReport M = monotonicity_scan(C, modes.at(v_mode), radii);
        json steps = json::array();
        for (StepKind k : M.steps) steps.push_back(step_name(k));
        result.update({{"mode", to_string(M.mode)},
                       {"radii", M.radii},
                       {"values", M.values},
                       {"errors", M.errors},
                       {"steps", steps},
                       {"nondecreasing", M.nondecreasing},
                       {"inconclusive", M.inconclusive}});
      } else if (v_measure == "stokes") {
        rep.param("r", v_r);
        StokesCheck s = stokes_check(C, v_r);
        result.update({{"lhs", s.lhs}, {"rhs", s.rhs}, {"error", s.error}});
      } else {
        throw ParseError("unknown measure " + v_measure);
      }
      emit(rep.envelope(result), out);
      return converged ? 0 : kNumeric;
    }

    if (*cert) {
      Report rep("certificate genus");
      rep.param("g", g_genus);
      rep.param("sinh2", g_sinh2);
      GenusCertificate c = genus_certificate(g_genus, g_sinh2);
      json result{{"genus", c.genus},
                  {"sinh2", c.sinh2},
                  {"feasible", c.feasible},
                  {"feasibility_threshold", c.feasibility_threshold},
                  {"line_feasible", c.line_feasible},
                  {"line_threshold", c.line_threshold},
                  {"step2_contradiction", c.step2_contradiction},
                  {"note", c.note}};
      if (c.feasible) {
        result["vol_upper"] = c.vol_upper;
        result["empty_bound"] = c.empty_bound;
      }
      if (c.line_feasible) result["line_vol_upper"] = c.line_vol_upper;
      emit(rep.envelope(result), out);
      return c.feasible ? 0 : kMath;
    }

    if (*hodge) {
      Report rep("hodge build");
      CMField F = io::parse_field(rep.file("field", h_field));
      ExactForm J = h_form.empty() ? diagonal_sqrtD_form(F)
                                   : io::parse_exact_form(rep.file("form", h_form), F);
      FieldElement alpha = h_alpha.empty() ? default_polarization_scalar(F)
                                           : io::parse_element(rep.file("alpha", h_alpha), F);
      Vec3 v = io::parse_complex_vector(io::unwrap(rep.file("v", h_v), "v"));
      LatticeBasis B = lattice_basis(F);
      HodgeFrame fr = hodge_decomposition(v, B, J, alpha);
      RiemannReport rr = riemann_check(fr);
      PeriodReport pr = period_check(fr);
      json Q = json::array();
      for (const auto& row : fr.polarization.entries) {
        json r = json::array();
        for (const Rational& q : row) r.push_back(io::to_json(q));
        Q.push_back(r);
      }
      json P = json::array();
      for (int a = 0; a < 6; ++a) {
        json r = json::array();
        for (int k = 0; k < 12; ++k) r.push_back(io::to_json(fr.period_matrix(a, k)));
        P.push_back(r);
      }
      json result{{"alpha", io::to_json(alpha)},
                  {"polarization", Q},
                  {"polarization_integral", fr.polarization.integral},
                  {"polarization_skew", fr.polarization.skew},
                  {"polarization_det", fr.polarization.det.get_str()},
                  {"sigma2_swapped", fr.sigma2_swapped},
                  {"period_matrix", P},
                  {"riemann", {{"max_isotropy", rr.max_isotropy},
                               {"min_eigenvalue", rr.min_eigenvalue},
                               {"union_rank", rr.union_rank},
                               {"holds", rr.holds}}},
                  {"period", {{"rank", pr.rank},
                              {"min_singular", pr.min_singular},
                              {"lattice_gram_det", pr.lattice_gram_det}}}};
      if (!fr.polarization.integral) result["integrality_failures"] = fr.polarization.failures;
      emit(rep.envelope(result), out);
      if (!fr.polarization.integral) return kMath;
      return rr.holds ? 0 : kNumeric;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const MathError& e) {
    std::cerr << "rejected: " << e.what() << "\n";
    return kMath;
  } catch (const NumericError& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return kNumeric;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  }
  return 0;
}

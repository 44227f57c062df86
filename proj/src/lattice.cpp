#include "cmball/lattice.hpp"

#include <algorithm>
#include <cmath>

#include <omp.h>

#include "cmball/errors.hpp"

namespace cmball {

ArithmeticLattice::ArithmeticLattice(const CMField& F, const ExactForm& form) : F_(F), form_(form) {
  if (!form.field().same_as(F)) throw MathError("form is defined over a different field");
  if (!is_admissible(form)) {
    throw MathError("form is not admissible: need signature (2,1) under sigma1 and definite "
                    "under sigma2");
  }
}

ExactForm diagonal_sqrtD_form(const CMField& F) {
  return ExactForm(F, ExactMat::diagonal(F.one(), F.one(), -F.sqrt_D()));
}

MembershipResult is_member(const ArithmeticLattice& L, const ExactMat& M) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (!M(i, j).is_integral()) {
        return {false, "entry (" + std::to_string(i) + "," + std::to_string(j) + ") = " +
                           M(i, j).to_string() + " is not integral"};
      }
  const ExactMat& J = L.form().matrix();
  if (!(M.adjoint() * J * M == J)) return {false, "M^H J M != J"};
  FieldElement d = M.det();
  if (!(d == FieldElement::integer(1))) return {false, "det = " + d.to_string() + " != 1"};
  return {true, ""};
}

// ------------------------------------------------------------------ triples

namespace {

bool rational_sqrt(const Rational& q, Rational& root) {
  if (sgn(q) < 0) return false;
  mpz_class n = q.get_num(), d = q.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return false;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  root = Rational(rn, rd);
  root.canonicalize();
  return true;
}

// a + b*omega as p + q*sqrt(r).
void surd_form(const KElement& x, Rational& p, Rational& q, long& r) {
  const QuadParams& qp = x.params();
  if (qp.omega_trace == 1) {
    p = x.a() + x.b() / 2;
    q = x.b() / 2;
    r = qp.D;
  } else {
    p = x.a();
    q = x.b();
    r = qp.D / 4;
  }
}

int exact_order(const ExactMat& M, int max_order) {
  ExactMat P = M;
  for (int n = 1; n <= max_order; ++n) {
    if (P.is_identity()) return n;
    P = P * M;
  }
  return 0;
}

}  // namespace

bool is_square_in_K(const KElement& x) {
  if (x.is_zero()) return true;
  Rational p, q;
  long r = 1;
  surd_form(x, p, q, r);
  if (x.params().D == 0) {
    Rational s;
    return rational_sqrt(x.a(), s);
  }
  // (X + Y sqrt r)^2 = X^2 + r Y^2 + 2XY sqrt r.
  Rational s;
  Rational N = p * p - r * q * q;
  if (!rational_sqrt(N, s)) return false;
  for (int sign : {1, -1}) {
    Rational X, Y;
    Rational x2 = (p + sign * s) / 2;
    Rational y2 = (p - sign * s) / (2 * r);
    if (rational_sqrt(x2, X) && rational_sqrt(y2, Y) && 2 * X * Y == abs(q)) return true;
  }
  return false;
}

AllowedTriples allowed_triples(const CMField& F) {
  if (F.D() <= 21) {
    throw MathError("allowed eigenvalue triples are only classified for D > 21 (got D = " +
                    std::to_string(F.D()) + ")");
  }
  AllowedTriples out;
  out.triples = {{"(1,-1,-1)", 2, -1}, {"(1,w,w^2)", 3, 0}, {"(1,i,-i)", 4, 1},
                 {"(1,-w,-w^2)", 6, 2}};
  for (long a0 : {-1L, -2L, -3L, -7L}) {
    if (is_square_in_K(F.alpha() / KElement::rational(a0))) {
      out.exceptional = true;
      out.exceptional_alpha0 = a0;
      out.max_order = 18;
      switch (a0) {
        case -1: out.extra_orders = {8, 12}; break;
        case -2: out.extra_orders = {8}; break;
        case -3: out.extra_orders = {9, 12, 18}; break;
        case -7: out.extra_orders = {7, 14}; break;
      }
      break;
    }
  }
  return out;
}

std::string triple_name(const FieldElement& trace) {
  if (trace.is_real() && trace.x().is_rational() && trace.x().is_integral()) {
    long t = trace.x().a().get_num().get_si();
    switch (t) {
      case -1: return "(1,-1,-1)";
      case 0: return "(1,w,w^2)";
      case 1: return "(1,i,-i)";
      case 2: return "(1,-w,-w^2)";
      case 3: return "(1,1,1)";
      default: break;
    }
  }
  return "other";
}

// --------------------------------------------------------------- reflection

ReflectionResult reflection_about_vector(const ArithmeticLattice& L, const ExactVec& v,
                                         const FieldElement& lambda) {
  const ExactForm& form = L.form();
  FieldElement h = form.evaluate(v, v);
  if (h.is_zero()) throw MathError("reflection vector is null");
  bool root_of_unity = false;
  FieldElement p = lambda;
  for (int n = 1; n <= 18 && !root_of_unity; ++n, p = p * lambda)
    root_of_unity = p == FieldElement::integer(1);
  if (!root_of_unity) throw MathError("lambda is not a root of unity in F");
  const ExactMat& J = form.matrix();
  // Row vector v^H J.
  std::array<FieldElement, 3> vhJ;
  for (int j = 0; j < 3; ++j)
    vhJ[j] = v[0].cm_conjugate() * J(0, j) + v[1].cm_conjugate() * J(1, j) +
             v[2].cm_conjugate() * J(2, j);
  FieldElement c = (FieldElement::integer(1) - lambda) / h;

  ReflectionResult out;
  out.integral = true;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      FieldElement corr = c * v[i] * vhJ[j];
      out.matrix(i, j) = (i == j ? FieldElement::integer(1) : FieldElement::integer(0)) - corr;
      if (!corr.is_integral()) {
        out.integral = false;
        out.rejections.push_back("correction term at (" + std::to_string(i) + "," +
                                 std::to_string(j) + ") = " + corr.to_string() +
                                 " is not integral (divisibility failure)");
      }
    }
  out.unitary = out.matrix.adjoint() * J * out.matrix == J;
  if (!out.unitary) out.rejections.push_back("matrix does not preserve the form");
  out.det = out.matrix.det();
  if (!(out.det == FieldElement::integer(1))) {
    out.rejections.push_back("det = " + out.det.to_string() + " != 1");
  }
  out.member = out.integral && out.unitary && out.det == FieldElement::integer(1);
  out.order = exact_order(out.matrix, 18);
  return out;
}

// ------------------------------------------------------------ torsion data

namespace {

int max_torsion_order(const CMField& F) {
  // For D <= 21 the cyclotomic bound phi(n) <= 12 allows n up to 42.
  if (F.D() <= 21) return 42;
  return allowed_triples(F).max_order;
}

Vec3 unit(const Vec3& v) {
  double n = v.norm();
  return n > 0 ? Vec3(v / n) : v;
}

bool same_projective(const Vec3& a, const Vec3& b, double tol = 1e-9) {
  if (a.norm() == 0 || b.norm() == 0) return a.norm() == b.norm();
  return std::abs(a.dot(b)) / (a.norm() * b.norm()) >= 1.0 - tol;
}

bool same_locus(const FixedLocus& a, const FixedLocus& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case LocusKind::WholeBall: return true;
    case LocusKind::BoundaryPair:
      return same_projective(a.primary, b.primary) && same_projective(a.secondary, b.secondary);
    default: return same_projective(a.primary, b.primary);
  }
}

}  // namespace

TorsionDatum make_torsion_datum(const ArithmeticLattice& L, const ExactMat& M) {
  MembershipResult m = is_member(L, M);
  if (!m.member) throw MathError("not a lattice member: " + m.reason);
  TorsionDatum d;
  d.element = M;
  d.trace = M.trace();
  d.order = exact_order(M, max_torsion_order(L.field()));
  if (d.order == 0) throw MathError("element is not torsion within the order bound");
  IsometryClass c = classify(ExactIsometry(M, L.form()));
  d.label = c.label;
  d.locus = c.locus;
  d.locus.primary = unit(d.locus.primary);
  d.locus.secondary = unit(d.locus.secondary);
  d.triple = triple_name(d.trace);
  return d;
}

// ---------------------------------------------------------- torsion search

namespace {

struct Column {
  ExactVec exact;
  Vec3 s1, s2;
};

struct SearchSpace {
  std::array<std::vector<Column>, 3> columns;
  std::size_t examined = 0;
  std::size_t candidates = 0;
};

bool near(Complex a, Complex b) { return std::abs(a - b) <= 1e-8 * std::max(1.0, std::abs(b)); }

SearchSpace build_columns(const ArithmeticLattice& L, int cap) {
  const CMField& F = L.field();
  const ExactMat& J = L.form().matrix();
  const Mat3 J1 = J.embed(Embedding::Sigma1);
  const Mat3 J2 = J.embed(Embedding::Sigma2);

  std::vector<FieldElement> elts;
  std::vector<Complex> e1, e2;
  for (long a = -cap; a <= cap; ++a)
    for (long b = -cap; b <= cap; ++b)
      for (long c = -cap; c <= cap; ++c)
        for (long d = -cap; d <= cap; ++d) {
          FieldElement x = F.element(a, b, c, d);
          e1.push_back(x.embed(Embedding::Sigma1));
          e2.push_back(x.embed(Embedding::Sigma2));
          elts.push_back(std::move(x));
        }

  // sigma2 makes the form definite, which bounds every entry of a column.
  Eigen::SelfAdjointEigenSolver<Mat3> es(J2, Eigen::EigenvaluesOnly);
  double m = std::min(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(2)));

  SearchSpace space;
  std::size_t budget = 0;
  std::array<std::vector<std::size_t>, 3> cand;
  for (int k = 0; k < 3; ++k) {
    double bound = std::abs(J2(k, k)) / m * (1 + 1e-9) + 1e-12;
    for (std::size_t e = 0; e < elts.size(); ++e)
      if (std::norm(e2[e]) <= bound) cand[k].push_back(e);
    budget += cand[k].size() * cand[k].size() * cand[k].size();
  }
  if (budget > 200'000'000ULL) {
    throw MathError("torsion search exceeds the enumeration budget at this height cap");
  }

  for (int k = 0; k < 3; ++k) {
    const auto& ck = cand[k];
    for (std::size_t i0 : ck)
      for (std::size_t i1 : ck)
        for (std::size_t i2 : ck) {
          ++space.examined;
          Vec3 v2(e2[i0], e2[i1], e2[i2]);
          if (!near((v2.adjoint() * J2 * v2)(0), J2(k, k))) continue;
          Vec3 v1(e1[i0], e1[i1], e1[i2]);
          if (!near((v1.adjoint() * J1 * v1)(0), J1(k, k))) continue;
          ExactVec ex{elts[i0], elts[i1], elts[i2]};
          if (!(L.form().evaluate(ex, ex) == J(k, k))) continue;
          space.columns[k].push_back({ex, v1, v2});
        }
    space.candidates += space.columns[k].size();
  }
  return space;
}

/// All members whose first column is columns[0][i0], in enumeration order.
std::vector<ExactMat> complete_from_first(const ArithmeticLattice& L, const SearchSpace& s,
                                          std::size_t i0, int max_order) {
  const ExactMat& J = L.form().matrix();
  const Mat3 J1 = J.embed(Embedding::Sigma1);
  const Mat3 J2 = J.embed(Embedding::Sigma2);
  const ExactForm& form = L.form();
  const Column& c0 = s.columns[0][i0];
  std::vector<ExactMat> out;
  for (const Column& c1 : s.columns[1]) {
    // M^H J M = J entrywise: <c_j, c_i> = J(i, j).
    if (!near((c0.s2.adjoint() * J2 * c1.s2)(0), J2(0, 1))) continue;
    if (!near((c0.s1.adjoint() * J1 * c1.s1)(0), J1(0, 1))) continue;
    if (!(form.evaluate(c1.exact, c0.exact) == J(0, 1))) continue;
    for (const Column& c2 : s.columns[2]) {
      if (!near((c0.s2.adjoint() * J2 * c2.s2)(0), J2(0, 2))) continue;
      if (!near((c1.s2.adjoint() * J2 * c2.s2)(0), J2(1, 2))) continue;
      if (!near((c0.s1.adjoint() * J1 * c2.s1)(0), J1(0, 2))) continue;
      if (!near((c1.s1.adjoint() * J1 * c2.s1)(0), J1(1, 2))) continue;
      if (!(form.evaluate(c2.exact, c0.exact) == J(0, 2))) continue;
      if (!(form.evaluate(c2.exact, c1.exact) == J(1, 2))) continue;
      ExactMat M;
      for (int i = 0; i < 3; ++i) {
        M(i, 0) = c0.exact[i];
        M(i, 1) = c1.exact[i];
        M(i, 2) = c2.exact[i];
      }
      if (!(M.det() == FieldElement::integer(1))) continue;
      if (exact_order(M, max_order) == 0) continue;
      out.push_back(std::move(M));
    }
  }
  return out;
}

std::string matrix_key(const ExactMat& M) {
  std::string k;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      auto c = M(i, j).coordinates();
      for (const auto& q : c) k += q.get_str() + ",";
    }
  return k;
}

TorsionSearchResult finish_search(const ArithmeticLattice& L, int cap, const SearchSpace& s,
                                  std::vector<std::vector<ExactMat>>& per_first) {
  TorsionSearchResult res;
  res.height_cap = cap;
  res.columns_examined = s.examined;
  res.column_candidates = s.candidates;
  std::vector<TorsionDatum> all;
  for (auto& block : per_first)
    for (auto& M : block) all.push_back(make_torsion_datum(L, M));
  res.members_found = all.size();

  std::vector<std::string> keys;
  std::vector<std::size_t> idx(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    idx[i] = i;
    keys.push_back(matrix_key(all[i].element));
  }
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (all[a].order != all[b].order) return all[a].order < all[b].order;
    if (all[a].label != all[b].label) return all[a].label < all[b].label;
    return keys[a] < keys[b];
  });
  for (std::size_t i : idx) {
    const TorsionDatum& d = all[i];
    bool dup = std::any_of(res.elements.begin(), res.elements.end(), [&](const TorsionDatum& e) {
      return e.trace == d.trace && same_locus(e.locus, d.locus);
    });
    if (!dup) res.elements.push_back(d);
  }
  return res;
}

void check_cap(int cap) {
  if (cap < 0) throw MathError("height cap must be nonnegative");
  if (cap > kMaxSearchCap) {
    throw MathError("height cap " + std::to_string(cap) + " exceeds the enumeration budget (max " +
                    std::to_string(kMaxSearchCap) + ")");
  }
}

TorsionSearchResult identity_only(const ArithmeticLattice& L) {
  TorsionSearchResult res;
  res.elements.push_back(make_torsion_datum(L, ExactMat::identity(L.field())));
  res.members_found = 1;
  return res;
}

}  // namespace

TorsionSearchResult torsion_search_serial(const ArithmeticLattice& L, int cap) {
  check_cap(cap);
  if (cap == 0) return identity_only(L);
  SearchSpace s = build_columns(L, cap);
  int max_order = max_torsion_order(L.field());
  std::vector<std::vector<ExactMat>> per_first(s.columns[0].size());
  for (std::size_t i = 0; i < per_first.size(); ++i)
    per_first[i] = complete_from_first(L, s, i, max_order);
  return finish_search(L, cap, s, per_first);
}

TorsionSearchResult torsion_search(const ArithmeticLattice& L, int cap) {
  check_cap(cap);
  if (cap == 0) return identity_only(L);
  SearchSpace s = build_columns(L, cap);
  int max_order = max_torsion_order(L.field());
  const long n = static_cast<long>(s.columns[0].size());
  std::vector<std::vector<ExactMat>> per_first(n);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) per_first[i] = complete_from_first(L, s, i, max_order);
  return finish_search(L, cap, s, per_first);
}

// ---------------------------------------------------------- certificates

const char* to_string(PairVerdict v) {
  switch (v) {
    case PairVerdict::Coincide: return "coincide";
    case PairVerdict::IntersectAtIsolatedPoint: return "intersect_at_isolated_point";
    case PairVerdict::Ultraparallel: return "ultraparallel";
    case PairVerdict::Separated: return "separated";
    case PairVerdict::Trivial: return "trivial";
  }
  return "?";
}

TraceTrichotomy trace_trichotomy(const FieldElement& tr) {
  TraceTrichotomy t;
  t.abs2 = tr.abs2();
  t.two_re = KElement::rational(2) * tr.x();
  t.two_re_integral = t.two_re.is_integral();
  const KElement nine = KElement::rational(9);
  if (t.abs2.is_integral()) {
    if (t.abs2.is_rational()) {
      t.rational_case = sgn(t.abs2.a()) >= 0 && t.abs2.a() <= 9;
    } else {
      t.irrational_case = t.abs2.sign(false) >= 0 && (nine - t.abs2).sign(false) >= 0;
    }
  }
  t.holds = t.rational_case || t.irrational_case;
  return t;
}

namespace {

bool is_point_label(IsometryLabel l) {
  return l == IsometryLabel::RegularElliptic || l == IsometryLabel::ReflectionAboutPoint;
}

}  // namespace

RepulsionCertificate pair_certificate(const ArithmeticLattice& L, const TorsionDatum& a,
                                      const TorsionDatum& b) {
  if (a.order == 0 || b.order == 0) throw MathError("pair certificate needs torsion elements");
  const ExactForm& form = L.form();
  const HermitianForm hform = form.embed(Embedding::Sigma1);
  RepulsionCertificate rc;
  ExactMat prod = a.element * b.element;
  rc.trace_product = prod.trace();
  rc.trace_inv_product = (a.element.adjugate() * b.element).trace();
  rc.trichotomy = trace_trichotomy(rc.trace_product);

  auto set_product_label = [&] {
    rc.product_label = classify(ExactIsometry(prod, form)).label;
  };

  if (a.element == b.element) {
    rc.verdict = PairVerdict::Coincide;
    rc.note = "same element; tr(M1^-1 M2) = 3";
    if (a.locus.kind == LocusKind::Point) rc.common_point = a.locus.primary;
    return rc;
  }

  const bool a_line = a.label == IsometryLabel::ReflectionAboutLine;
  const bool b_line = b.label == IsometryLabel::ReflectionAboutLine;
  const bool a_point = is_point_label(a.label);
  const bool b_point = is_point_label(b.label);

  if (a_line && b_line) {
    ComplexLine l1(a.locus.primary, hform), l2(b.locus.primary, hform);
    LineRelation rel = line_relation(l1, l2, 1e-9);
    int side;
    const FieldElement minus_one = FieldElement::integer(-1);
    if (a.trace == minus_one && b.trace == minus_one && rc.trace_product.is_real()) {
      // tr(M1 M2) = 4 ta(n1, n2) - 1 for two (-1,-1,1) reflections.
      KElement ta = (rc.trace_product.x() + KElement::rational(1)) / KElement::rational(4);
      rc.exact_tance = ta;
      side = (ta - KElement::rational(1)).sign(true);
    } else {
      side = rel.kind == LineRelationKind::Ultraparallel ? 1
             : rel.kind == LineRelationKind::Intersecting ? -1 : 0;
    }
    if (side > 0) {
      rc.verdict = PairVerdict::Ultraparallel;
      rc.distance = rel.distance;
      if (rc.exact_tance) {
        KElement w = KElement::rational(8) * *rc.exact_tance;
        rc.witness = w;
        rc.witness_nonrational = w.is_integral() && !w.is_rational();
        // sigma1 - sigma2 of a + b*omega is b sqrt D.
        rc.witness_gap_ok = w.b() >= 1;
      }
    } else if (side < 0) {
      rc.verdict = PairVerdict::IntersectAtIsolatedPoint;
      rc.common_point = rel.intersection;
      set_product_label();
    } else {
      rc.verdict = same_locus(a.locus, b.locus) ? PairVerdict::Coincide : PairVerdict::Separated;
      rc.note = rc.verdict == PairVerdict::Coincide ? "same line" : "asymptotic lines";
    }
    return rc;
  }

  if (a_point && b_point) {
    BallPoint p(a.locus.primary, hform), q(b.locus.primary, hform);
    bool same = same_locus(a.locus, b.locus);
    const FieldElement minus_one = FieldElement::integer(-1);
    if (a.trace == minus_one && b.trace == minus_one && rc.trace_product.is_real()) {
      KElement ta = (rc.trace_product.x() + KElement::rational(1)) / KElement::rational(4);
      rc.exact_tance = ta;
      same = ta == KElement::rational(1);
    }
    if (same) {
      rc.verdict = PairVerdict::Coincide;
      rc.common_point = a.locus.primary;
      set_product_label();
    } else {
      rc.verdict = PairVerdict::Separated;
      rc.distance = distance(p, q);
    }
    return rc;
  }

  if ((a_point && b_line) || (a_line && b_point)) {
    const TorsionDatum& pt = a_point ? a : b;
    const TorsionDatum& ln = a_point ? b : a;
    BallPoint p(pt.locus.primary, hform);
    ComplexLine l(ln.locus.primary, hform);
    if (tanh2_half_distance(p, l) <= 1e-12) {
      rc.verdict = PairVerdict::IntersectAtIsolatedPoint;
      rc.common_point = pt.locus.primary;
      set_product_label();
    } else {
      rc.verdict = PairVerdict::Separated;
      rc.distance = dist_point_line(p, l);
    }
    return rc;
  }

  rc.verdict = PairVerdict::Trivial;
  rc.note = "an element without a proper fixed locus";
  return rc;
}

LoxodromicFloor loxodromic_floor(long D) {
  double x = (std::pow(static_cast<double>(D), 0.25) - 1.0) / 2.0;
  if (x < 1.0) return {0.0, false};
  return {std::acosh(x), true};
}

LoxodromicWitness loxodromic_witness(const FieldElement& trace) {
  LoxodromicWitness w;
  w.abs2 = trace.abs2();
  long D = w.abs2.params().D;
  w.gap = w.abs2.b().get_d() * std::sqrt(static_cast<double>(D));
  w.holds = D > 0 && w.abs2.b() >= 1;
  return w;
}

}  // namespace cmball

#include "cmball/errors.hpp"
#include "cmball/lattice.hpp"
#include "doctest.h"

using namespace cmball;

namespace {

ExactMat signed_perm(const CMField& F, int p0, int p1, int p2, int s0, int s1, int s2) {
  ExactMat M;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) M(i, j) = F.zero();
  M(p0, 0) = F.element(s0);
  M(p1, 1) = F.element(s1);
  M(p2, 2) = F.element(s2);
  return M;
}

std::string key(const ExactMat& M) {
  std::string s;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += M(i, j).to_string() + ";";
  return s;
}

}  // namespace

TEST_SUITE("lattice") {
  TEST_CASE("diagonal form is admissible and membership") {
    CMField F(5, -11, 0);
    ArithmeticLattice L(F, diagonal_sqrtD_form(F));
    CHECK(is_member(L, signed_perm(F, 0, 1, 2, 1, -1, -1)).member);
    CHECK(is_member(L, signed_perm(F, 1, 0, 2, 1, -1, 1)).member);
    auto r = is_member(L, signed_perm(F, 0, 1, 2, 1, 1, -1));
    CHECK_FALSE(r.member);  // determinant -1
    CHECK_FALSE(r.reason.empty());
    ExactMat half = ExactMat::identity(F);
    half(0, 0) = F.element(Rational(1, 2));
    CHECK_FALSE(is_member(L, half).member);
    // Swapping a positive and the negative basis vector breaks unitarity.
    CHECK_FALSE(is_member(L, signed_perm(F, 2, 1, 0, -1, 1, 1)).member);
  }

  TEST_CASE("inadmissible forms are rejected") {
    CMField F(5, -11, 0);
    ExactForm J(F, ExactMat::diagonal(F.one(), F.one(), F.element(-1)));
    CHECK_THROWS_AS(ArithmeticLattice(F, J), MathError);
  }

  TEST_CASE("reflection about a basis vector") {
    CMField F(5, -11, 0);
    ArithmeticLattice L(F, diagonal_sqrtD_form(F));
    ExactVec e1{F.one(), F.zero(), F.zero()};
    auto r = reflection_about_vector(L, e1, F.element(-1));
    CHECK(r.unitary);
    CHECK(r.integral);
    CHECK(r.order == 2);
    // Eigenvalue -1 on e1 alone has determinant -1, so it is not in SU.
    CHECK_FALSE(r.member);
  }

  TEST_CASE("allowed triples") {
    CHECK_THROWS_AS(allowed_triples(CMField(21, -1, 0)), MathError);
    auto plain = allowed_triples(CMField(29, -11, 0));
    CHECK_FALSE(plain.exceptional);
    CHECK(plain.max_order == 6);
    CHECK(plain.triples.size() == 4);
    auto gauss = allowed_triples(CMField(29, -4, 0));  // -4 / -1 is a square
    CHECK(gauss.exceptional);
    CHECK(gauss.exceptional_alpha0 == -1);
    CHECK(gauss.max_order == 18);
  }

  TEST_CASE("triple names and trichotomy") {
    CMField F(29, -11, 0);
    CHECK(triple_name(F.element(-1)) == "(1,-1,-1)");
    CHECK(triple_name(F.element(2)) == "(1,-w,-w^2)");
    CHECK(triple_name(F.omega()) == "other");
    for (int t : {-1, 0, 1, 2, 3, -3}) CHECK(trace_trichotomy(F.element(t)).holds);
    CHECK_FALSE(trace_trichotomy(F.element(4)).holds);            // |t|^2 = 16 > 9
    CHECK_FALSE(trace_trichotomy(F.element(Rational(1, 2))).holds);  // not integral
  }

  TEST_CASE("torsion search is deterministic and matches the serial reference") {
    CMField F(5, -11, 0);
    ArithmeticLattice L(F, diagonal_sqrtD_form(F));
    auto zero = torsion_search(L, 0);
    REQUIRE(zero.elements.size() == 1);
    CHECK(zero.elements[0].element.is_identity());
    auto par = torsion_search(L, 1);
    auto ser = torsion_search_serial(L, 1);
    REQUIRE(par.elements.size() == ser.elements.size());
    for (std::size_t i = 0; i < par.elements.size(); ++i) {
      CHECK(key(par.elements[i].element) == key(ser.elements[i].element));
    }
    CHECK(par.members_found == ser.members_found);
    for (const auto& d : par.elements) {
      CHECK(is_member(L, d.element).member);
      CHECK(d.order > 0);
    }
    CHECK_THROWS_AS(torsion_search(L, kMaxSearchCap + 1), MathError);
  }

  TEST_CASE("pair certificate for two line reflections through the origin") {
    CMField F(5, -11, 0);
    ArithmeticLattice L(F, diagonal_sqrtD_form(F));
    auto a = make_torsion_datum(L, signed_perm(F, 0, 1, 2, 1, -1, -1));
    auto b = make_torsion_datum(L, signed_perm(F, 0, 1, 2, -1, 1, -1));
    auto c = pair_certificate(L, a, b);
    CHECK(c.verdict == PairVerdict::IntersectAtIsolatedPoint);
    REQUIRE(c.common_point);
    Vec3 p = *c.common_point;
    CHECK(std::abs(p(0)) < 1e-12 * std::abs(p(2)));
    CHECK(std::abs(p(1)) < 1e-12 * std::abs(p(2)));
    REQUIRE(c.product_label);
    CHECK(*c.product_label == IsometryLabel::ReflectionAboutPoint);
    CHECK(c.trichotomy.holds);
  }

  TEST_CASE("loxodromic floor and witness") {
    CHECK_FALSE(loxodromic_floor(20).in_range);
    auto f = loxodromic_floor(10000);  // D^(1/4) = 10
    CHECK(f.in_range);
    CHECK(f.value == doctest::Approx(std::acosh(4.5)));
    CMField F(29, -11, 0);
    // |3 + omega|^2 = 9 + 6 omega + omega^2 has omega-coefficient 7.
    auto w = loxodromic_witness(F.element(3, 1));
    CHECK(w.holds);
    CHECK_FALSE(loxodromic_witness(F.element(5)).holds);
    CHECK(stabilizer_order_cap() == 48);
    CHECK(tube_fiber_cap() == 24);
  }
}

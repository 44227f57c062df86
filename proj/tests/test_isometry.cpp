#include <numbers>
#include <random>

#include "cmball/errors.hpp"
#include "cmball/isometry.hpp"
#include "cmball/lattice.hpp"
#include "doctest.h"

using namespace cmball;

namespace {

const HermitianForm kStd = HermitianForm::standard();

Mat3 diag(Complex a, Complex b, Complex c) { return Vec3(a, b, c).asDiagonal(); }

Mat3 boost(double t) {
  Mat3 M = Mat3::Identity();
  M(0, 0) = M(2, 2) = std::cosh(t);
  M(0, 2) = M(2, 0) = std::sinh(t);
  return M;
}

// Siegel-domain form <z,w> = z1 conj(w3) + z2 conj(w2) + z3 conj(w1).
HermitianForm siegel() {
  Mat3 J = Mat3::Zero();
  J(0, 2) = J(2, 0) = J(1, 1) = 1;
  return HermitianForm(J);
}

Mat3 heisenberg(Complex zeta, double v) {
  Mat3 M = Mat3::Identity();
  M(0, 1) = -std::conj(zeta);
  M(0, 2) = Complex(-std::norm(zeta) / 2, v);
  M(1, 2) = zeta;
  return M;
}

Complex unit(double a) { return std::polar(1.0, a); }

}  // namespace

TEST_SUITE("isometry") {
  TEST_CASE("trace invariant roots") {
    CHECK(goldman_f(Complex(3, 0)) == doctest::Approx(0.0));
    CHECK(goldman_f(Complex(-1, 0)) == doctest::Approx(0.0));
    // Independent expansion of the polynomial.
    Complex t(0.7, 1.9);
    double a = std::norm(t);
    double expect = a * a - 8 * std::pow(t, 3).real() + 18 * a - 27;
    CHECK(goldman_f(t) == doctest::Approx(expect).epsilon(1e-12));
    CMField F(5, -11, 0);
    CHECK(goldman_f(F.element(3)).is_zero());
    CHECK(goldman_f(F.element(-1)).is_zero());
  }

  TEST_CASE("labels of model elements") {
    CHECK(classify(Isometry(Mat3::Identity(), kStd)).label == IsometryLabel::Identity);
    Complex w = unit(2 * std::numbers::pi / 3);
    CHECK(classify(Isometry(w * Mat3::Identity(), kStd)).label == IsometryLabel::ScalarCube);
    CHECK(classify(Isometry(boost(0.9), kStd)).label == IsometryLabel::Loxodromic);
    CHECK(classify(Isometry(diag(unit(0.4), unit(1.1), unit(-1.5)), kStd)).label ==
          IsometryLabel::RegularElliptic);
    auto line = classify(Isometry(diag(1, -1, -1), kStd));
    CHECK(line.label == IsometryLabel::ReflectionAboutLine);
    CHECK(line.locus.kind == LocusKind::Line);
    auto point = classify(Isometry(diag(-1, -1, 1), kStd));
    CHECK(point.label == IsometryLabel::ReflectionAboutPoint);
    CHECK(point.locus.kind == LocusKind::Point);
    CHECK(classify(Isometry(heisenberg(Complex(0.5, 0.2), 0.3), siegel())).label ==
          IsometryLabel::PureParabolic);
    Mat3 screw = diag(unit(0.5), unit(-1.0), unit(0.5)) * heisenberg(0, 1.0);
    CHECK(classify(Isometry(screw, siegel())).label == IsometryLabel::ScrewParabolic);
  }

  TEST_CASE("non-isometries are rejected") {
    CHECK_THROWS_AS(Isometry(2.0 * Mat3::Identity(), kStd), MathError);
    CHECK_THROWS_AS(Isometry(diag(1, 1, -1), kStd), MathError);  // det -1
  }

  TEST_CASE("characteristic polynomial coefficients") {
    Mat3 M = boost(0.4) * diag(unit(0.3), unit(0.2), unit(-0.5));
    auto c = char_poly(Isometry(M, kStd));
    Eigen::ComplexEigenSolver<Mat3> es(M);
    for (int i = 0; i < 3; ++i) {
      Complex x = es.eigenvalues()(i);
      Complex p = ((c[0] * x + c[1]) * x + c[2]) * x + c[3];
      CHECK(std::abs(p) < 1e-9);
    }
  }

  TEST_CASE("eigenframe expansion and reconstruction") {
    std::mt19937 rng(9);
    std::normal_distribution<double> g;
    for (Mat3 M : {Mat3(diag(unit(0.4), unit(1.1), unit(-1.5))), Mat3(boost(1.2)),
                   Mat3(boost(0.5) * diag(unit(0.2), unit(-0.4), unit(0.2)) * boost(-0.5))}) {
      Isometry iso(M, kStd);
      Eigenframe fr = eigenframe(iso);
      for (int n = 0; n < 20; ++n) {
        Vec3 u(Complex(g(rng), g(rng)), Complex(g(rng), g(rng)), Complex(3.0, g(rng)));
        auto terms = expansion_terms(fr, kStd, u);
        Complex s = terms[0] + terms[1] + terms[2];
        CHECK(std::abs(s - 1.0) < 1e-9);
        CHECK((reconstruct(fr, kStd, u) - u).norm() < 1e-9 * u.norm());
      }
    }
  }

  TEST_CASE("trace from frames") {
    Isometry a(diag(unit(0.4), unit(1.1), unit(-1.5)), kStd);
    Isometry b(boost(0.7) * diag(-1, -1, 1) * boost(-0.7), kStd);
    Complex t = trace_from_frames(eigenframe(a), eigenframe(b), kStd);
    CHECK(std::abs(t - (a.matrix() * b.matrix()).trace()) < 1e-9);
  }

  TEST_CASE("orders and displacement") {
    CHECK(element_order(Isometry(diag(1, -1, -1), kStd)) == 2);
    Complex w = unit(2 * std::numbers::pi / 3);
    CHECK(element_order(Isometry(diag(w, w * w, 1), kStd)) == 3);
    CHECK(element_order(Isometry(boost(0.5), kStd)) == 0);
    BallPoint o = BallPoint::standard(0, 0);
    CHECK(displacement(Isometry(boost(0.5), kStd), o) == doctest::Approx(1.0));
  }

  TEST_CASE("elliptic proximity implication") {
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    Complex i(0, 1);
    const Complex w = unit(2 * std::numbers::pi / 3);
    // Orders 2, 4, 3, 4, 6; the last diagonal entry acts on the fixed point.
    const std::vector<Mat3> rots = {diag(-1, -1, 1), diag(i, i, -1), diag(1, w, w * w),
                                    diag(1, i, -i), diag(1, -w, -w * w)};
    for (const Mat3& M : rots) {
      Isometry iso(M, kStd);
      for (int n = 0; n < 100; ++n) {
        BallPoint p = BallPoint::standard(Complex(u(rng), u(rng)), Complex(u(rng), u(rng)));
        auto c = elliptic_proximity(iso, p, 1.5);
        CHECK(c.holds);
        CHECK(c.chain_ok);
      }
    }
  }

  TEST_CASE("line proximity implication") {
    std::mt19937 rng(6);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    Isometry iso(diag(1, -1, -1), kStd);
    for (int n = 0; n < 100; ++n) {
      BallPoint p = BallPoint::standard(Complex(u(rng), u(rng)), Complex(u(rng), u(rng)));
      auto c = line_proximity(iso, p, 1.2);
      CHECK(c.holds);
      CHECK(c.chain_ok);
    }
  }

  TEST_CASE("exact classification") {
    CMField F(5, -11, 0);
    ExactForm J = diagonal_sqrtD_form(F);
    ExactIsometry M(ExactMat::diagonal(F.one(), F.element(-1), F.element(-1)), J);
    auto c = classify(M);
    CHECK(c.label == IsometryLabel::ReflectionAboutLine);
    // Trace -1 lies on the discriminant curve.
    CHECK(goldman_f(M.trace()).is_zero());
  }
}

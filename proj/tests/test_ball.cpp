#include <random>

#include "cmball/ball.hpp"
#include "cmball/errors.hpp"
#include "doctest.h"

using namespace cmball;

namespace {

BallPoint random_point(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-0.45, 0.45);
  return BallPoint::standard(Complex(u(rng), u(rng)), Complex(u(rng), u(rng)));
}

// Boost mixing e1 and e3, an element of SU(2,1) for J = diag(1,1,-1).
Mat3 boost(double t) {
  Mat3 M = Mat3::Identity();
  M(0, 0) = M(2, 2) = std::cosh(t);
  M(0, 2) = M(2, 0) = std::sinh(t);
  return M;
}

}  // namespace

TEST_SUITE("ball") {
  TEST_CASE("distance from the origin along a disc") {
    for (double t : {0.1, 0.5, 0.9}) {
      double d = distance(BallPoint::standard(0, 0), BallPoint::standard(t, 0));
      CHECK(d == doctest::Approx(2 * std::atanh(t)).epsilon(1e-12));
    }
  }

  TEST_CASE("positive vectors are not points") {
    CHECK_THROWS_AS(BallPoint(Vec3(1, 0, 0), HermitianForm::standard()), MathError);
  }

  TEST_CASE("triangle inequality and isometry invariance") {
    std::mt19937 rng(1);
    Mat3 M = boost(0.8);
    HermitianForm J = HermitianForm::standard();
    for (int n = 0; n < 200; ++n) {
      BallPoint a = random_point(rng), b = random_point(rng), c = random_point(rng);
      CHECK(distance(a, c) <= distance(a, b) + distance(b, c) + 1e-9);
      BallPoint Ma(M * a.rep(), J), Mb(M * b.rep(), J);
      CHECK(distance(Ma, Mb) == doctest::Approx(distance(a, b)).epsilon(1e-9));
    }
  }

  TEST_CASE("distance to a complex line") {
    HermitianForm J = HermitianForm::standard();
    ComplexLine axis(Vec3(1, 0, 0), J);  // z = 0
    CHECK(dist_point_line(BallPoint::standard(0.4, 0), axis) ==
          doctest::Approx(2 * std::atanh(0.4)));
    CHECK(dist_point_line(BallPoint::standard(0, 0.7), axis) == doctest::Approx(0.0));
    // Along the line w = const the nearest point is (0, w).
    Complex w(0.3, 0.2);
    double z = 0.5;
    double expect = distance(BallPoint::standard(z, w), BallPoint::standard(0, w));
    CHECK(dist_point_line(BallPoint::standard(z, w), axis) == doctest::Approx(expect).epsilon(1e-10));
  }

  TEST_CASE("line relations") {
    HermitianForm J = HermitianForm::standard();
    ComplexLine l1(Vec3(1, 0, 0), J), l2(Vec3(0, 1, 0), J);
    LineRelation r = line_relation(l1, l2);
    CHECK(r.kind == LineRelationKind::Intersecting);
    REQUIRE(r.intersection);
    Vec3 p = *r.intersection;
    CHECK(std::abs(p(0)) < 1e-12 * std::abs(p(2)));
    CHECK(std::abs(p(1)) < 1e-12 * std::abs(p(2)));

    // Lines z = 0 and z = c are ultraparallel at distance 2 atanh(c).
    double c = 0.6;
    ComplexLine l3(Vec3(1, 0, c), J);
    LineRelation u = line_relation(l1, l3);
    CHECK(u.kind == LineRelationKind::Ultraparallel);
    CHECK(u.distance == doctest::Approx(2 * std::atanh(c)).epsilon(1e-10));
    CHECK(line_relation(l1, l1).kind == LineRelationKind::AsymptoticOrEqual);
  }

  TEST_CASE("regions") {
    Region ball(GeodesicBall{BallPoint::standard(0, 0), 1.0});
    double edge = std::tanh(0.5);
    CHECK(ball.contains(BallPoint::standard(0.99 * edge, 0)));
    CHECK_FALSE(ball.contains(BallPoint::standard(1.01 * edge, 0)));
    CHECK(ball.is_ball());
    Region tube(Tube{ComplexLine(Vec3(1, 0, 0), HermitianForm::standard()), 1.0});
    CHECK(tube.contains(BallPoint::standard(0.0, 0.95)));
    CHECK_FALSE(tube.contains(BallPoint::standard(0.6, 0.0)));
    CHECK(tube.radius() == 1.0);
  }
}

#include "cmball/ball.hpp"

#include <cmath>

#include "cmball/errors.hpp"

namespace cmball {

namespace {

void require_same_form(const HermitianForm& a, const HermitianForm& b) {
  if (!a.same_as(b)) throw MathError("arguments live on different ambient forms");
}

}  // namespace

BallPoint::BallPoint(const Vec3& rep, const HermitianForm& form) : rep_(rep), form_(form) {
  if (form.sign_class(rep) != SignClass::Negative) {
    throw MathError("ball point representative is not a negative vector");
  }
}

BallPoint BallPoint::standard(Complex z, Complex w) {
  return BallPoint(Vec3(z, w, 1.0), HermitianForm::standard());
}

ComplexLine::ComplexLine(const Vec3& polar, const HermitianForm& form)
    : polar_(polar), form_(form) {
  if (form.sign_class(polar) != SignClass::Positive) {
    throw MathError("polar vector of a complex line must be positive");
  }
}

double distance(const BallPoint& p, const BallPoint& q) {
  require_same_form(p.form(), q.form());
  double ta = tance(p.form(), p.rep(), q.rep());
  return 2.0 * std::acosh(std::sqrt(std::max(ta, 1.0)));
}

double tanh2_half_distance(const BallPoint& p, const ComplexLine& line) {
  require_same_form(p.form(), line.form());
  double ta = tance(p.form(), p.rep(), line.polar());
  return std::max(0.0, -ta / (1.0 - ta));
}

double dist_point_line(const BallPoint& p, const ComplexLine& line) {
  return 2.0 * std::atanh(std::sqrt(tanh2_half_distance(p, line)));
}

const char* to_string(LineRelationKind k) {
  switch (k) {
    case LineRelationKind::Ultraparallel: return "ultraparallel";
    case LineRelationKind::AsymptoticOrEqual: return "asymptotic_or_equal";
    case LineRelationKind::Intersecting: return "intersecting";
  }
  return "?";
}

LineRelation line_relation(const ComplexLine& l1, const ComplexLine& l2, double tol) {
  require_same_form(l1.form(), l2.form());
  LineRelation rel;
  rel.tance = tance(l1.form(), l1.polar(), l2.polar());
  if (rel.tance > 1.0 + tol) {
    rel.kind = LineRelationKind::Ultraparallel;
    rel.distance = 2.0 * std::acosh(std::sqrt(rel.tance));
  } else if (rel.tance >= 1.0 - tol) {
    rel.kind = LineRelationKind::AsymptoticOrEqual;
  } else {
    rel.kind = LineRelationKind::Intersecting;
    // x with <x,n1> = <x,n2> = 0: Euclidean-orthogonal to J n1 and J n2.
    const Mat3& J = l1.form().matrix();
    Vec3 a = J * l1.polar();
    Vec3 b = J * l2.polar();
    Vec3 x = a.cross(b).conjugate();
    rel.intersection = x / x.norm();
  }
  return rel;
}

Region::Region(GeodesicBall b) : shape_(std::move(b)) {
  if (!(std::get<GeodesicBall>(shape_).radius > 0)) throw MathError("region radius must be positive");
}

Region::Region(Tube t) : shape_(std::move(t)) {
  if (!(std::get<Tube>(shape_).radius > 0)) throw MathError("region radius must be positive");
}

double Region::radius() const {
  return std::visit([](const auto& s) { return s.radius; }, shape_);
}

bool Region::contains(const BallPoint& p) const {
  if (const auto* b = std::get_if<GeodesicBall>(&shape_)) {
    require_same_form(b->center.form(), p.form());
    double c = std::cosh(b->radius / 2.0);
    return tance(p.form(), b->center.rep(), p.rep()) < c * c;
  }
  const auto& t = std::get<Tube>(shape_);
  double th = std::tanh(t.radius / 2.0);
  return tanh2_half_distance(p, t.line) < th * th;
}

}  // namespace cmball

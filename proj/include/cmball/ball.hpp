#pragma once

// Points, complex lines and regions of the complex hyperbolic 2-ball in the
// projective model. Representatives are kept unnormalized.

#include <optional>
#include <variant>

#include "cmball/hermitian.hpp"

namespace cmball {

class BallPoint {
 public:
  /// Throws MathError unless rep is a negative vector of the form.
  BallPoint(const Vec3& rep, const HermitianForm& form);
  /// The point (z, w) of the unit ball, i.e. [z, w, 1] under J_std.
  static BallPoint standard(Complex z, Complex w);

  const Vec3& rep() const { return rep_; }
  const HermitianForm& form() const { return form_; }

 private:
  Vec3 rep_;
  HermitianForm form_;
};

class ComplexLine {
 public:
  /// The line {x : <x, polar> = 0}; polar must be a positive vector.
  ComplexLine(const Vec3& polar, const HermitianForm& form);

  const Vec3& polar() const { return polar_; }
  const HermitianForm& form() const { return form_; }

 private:
  Vec3 polar_;
  HermitianForm form_;
};

double distance(const BallPoint& p, const BallPoint& q);

/// tanh^2(d(p, L)/2) = -ta(p,n) / (1 - ta(p,n)).
double tanh2_half_distance(const BallPoint& p, const ComplexLine& line);
double dist_point_line(const BallPoint& p, const ComplexLine& line);

enum class LineRelationKind { Ultraparallel, AsymptoticOrEqual, Intersecting };

const char* to_string(LineRelationKind k);

struct LineRelation {
  LineRelationKind kind;
  double tance = 0;     // ta(n1, n2)
  double distance = 0;  // only for ultraparallel lines
  std::optional<Vec3> intersection;  // only for intersecting lines
};

LineRelation line_relation(const ComplexLine& l1, const ComplexLine& l2, double tol = 1e-12);

struct GeodesicBall {
  BallPoint center;
  double radius;
};

struct Tube {
  ComplexLine line;
  double radius;
};

/// Geodesic ball or tubular neighbourhood of a complex line; membership is strict.
class Region {
 public:
  Region(GeodesicBall b);
  Region(Tube t);

  bool contains(const BallPoint& p) const;
  double radius() const;
  bool is_ball() const { return std::holds_alternative<GeodesicBall>(shape_); }
  const std::variant<GeodesicBall, Tube>& shape() const { return shape_; }

 private:
  std::variant<GeodesicBall, Tube> shape_;
};

}  // namespace cmball

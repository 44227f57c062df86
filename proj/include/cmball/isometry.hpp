#pragma once

// Holomorphic isometries of the ball as elements of SU(J): membership,
// trace-based classification, eigenframes and displacement estimates.

#include <array>
#include <optional>
#include <string>

#include "cmball/ball.hpp"

namespace cmball {

enum class IsometryLabel {
  Identity,
  ScalarCube,
  Loxodromic,
  PureParabolic,
  ScrewParabolic,
  RegularElliptic,
  ReflectionAboutPoint,
  ReflectionAboutLine,
};

const char* to_string(IsometryLabel l);
bool is_elliptic(IsometryLabel l);

enum class LocusKind { WholeBall, Point, Line, BoundaryPair, BoundaryPoint };

const char* to_string(LocusKind k);

/// Fixed locus in the ball (or on its boundary). For a point, `primary` is a
/// negative representative; for a line, the polar vector; for boundary loci
/// the null eigenvectors.
struct FixedLocus {
  LocusKind kind = LocusKind::WholeBall;
  Vec3 primary = Vec3::Zero();
  Vec3 secondary = Vec3::Zero();
};

/// Eigenvectors scaled to unit Euclidean norm with the realized inner products.
///
/// Elliptic frames are J-orthogonal and ordered negative vector first; for a
/// reflection about a line the polar vector comes last. Loxodromic frames are
/// ordered (|lambda| > 1, |lambda| < 1, |lambda| = 1).
struct Eigenframe {
  std::array<Vec3, 3> vectors;
  std::array<Complex, 3> values;
  Mat3 gram;  // gram(i,j) = <v_j, v_i>
  bool loxodromic = false;
  bool pattern_ok = false;
  double max_violation = 0;
};

struct IsometryClass {
  IsometryLabel label;
  std::array<Complex, 3> eigenvalues;
  double f = 0;  // numeric shadow of the trace invariant
  std::optional<Eigenframe> frame;
  FixedLocus locus;
};

/// Numeric element of SU(J).
class Isometry {
 public:
  /// Throws MathError unless M^H J M = J and det M = 1 within 1e-10.
  Isometry(const Mat3& M, const HermitianForm& form);

  const Mat3& matrix() const { return M_; }
  const HermitianForm& form() const { return form_; }
  Complex trace() const { return M_.trace(); }

 private:
  Mat3 M_;
  HermitianForm form_;
};

/// Exact element of SU(J) over F.
class ExactIsometry {
 public:
  /// Throws MathError unless M^H J M = J and det M = 1 exactly.
  ExactIsometry(const ExactMat& M, const ExactForm& form);

  const ExactMat& matrix() const { return M_; }
  const ExactForm& form() const { return form_; }
  FieldElement trace() const { return M_.trace(); }
  /// Image under sigma1.
  Isometry embedded() const;

 private:
  ExactMat M_;
  ExactForm form_;
};

double unitarity_residual(const Mat3& M, const Mat3& J);

/// Coefficients of lambda^3 - t lambda^2 + conj(t) lambda - 1, leading first.
std::array<Complex, 4> char_poly(const Isometry& M);
std::array<FieldElement, 4> char_poly(const ExactIsometry& M);

/// |t|^4 - 8 Re(t^3) + 18 |t|^2 - 27.
double goldman_f(Complex t);
/// Exact value in K; Re and |.|^2 are taken with respect to the CM involution.
KElement goldman_f(const FieldElement& t);

/// Numeric classification; |f| < 1e-9 without a detectable repeated eigenvalue
/// throws NumericError ("borderline").
IsometryClass classify(const Isometry& M);
/// Exact classification: the sign of f is decided in K.
IsometryClass classify(const ExactIsometry& M);

/// Throws MathError for non-diagonalizable elements.
Eigenframe eigenframe(const Isometry& M);

/// Terms of the expansion identity for u (they sum to 1): ta(u, v_j) for
/// elliptic frames and (w, conj w, ta(u, v_3)) for loxodromic frames.
std::array<Complex, 3> expansion_terms(const Eigenframe& frame, const HermitianForm& form,
                                       const Vec3& u);
/// Reassembles u from its coordinates along the eigenframe.
Vec3 reconstruct(const Eigenframe& frame, const HermitianForm& form, const Vec3& u);

/// sum_{j,k} lambda_j mu_k ta(u_j, v_k) for two elliptic frames.
Complex trace_from_frames(const Eigenframe& a, const Eigenframe& b, const HermitianForm& form);

/// d(u, Mu).
double displacement(const Isometry& M, const BallPoint& u);
/// 2 acosh((|t| - 3)/2 + 1), the lower bound for loxodromic displacement.
double loxodromic_displacement_floor(Complex t);

/// Smallest n <= max_order with M^n = I (numerically), or 0.
int element_order(const Isometry& M, int max_order = 18);

struct ProximityCertificate {
  double d_u_Mu = 0;
  double d_u_locus = 0;
  double radius = 0;
  bool premise = false;     // d(u, Mu) < R
  bool conclusion = false;  // d(u, v1) < R, or d(u, L) < R/2 for lines
  bool holds = false;       // premise implies conclusion
  double slack = 0;
  double chain_lhs = 0;  // realized left side of the inequality chain
  double chain_rhs = 0;  // realized right side
  bool chain_ok = false;
  int order = 0;
};

/// For an elliptic element of order 2, 3, 4 or 6 with isolated fixed point v1.
ProximityCertificate elliptic_proximity(const Isometry& M, const BallPoint& u, double R);
/// For a reflection about a line with eigenvalues proportional to (-1, -1, 1).
ProximityCertificate line_proximity(const Isometry& M, const BallPoint& u, double R);

}  // namespace cmball

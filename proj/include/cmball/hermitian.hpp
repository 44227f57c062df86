#pragma once

// Hermitian forms on C^3 and F^3. The pairing convention is
// <z, w> = w^H J z, linear in the first argument.

#include <array>
#include <utility>

#include <Eigen/Dense>

#include "cmball/cmfield.hpp"

namespace cmball {

using Vec3 = Eigen::Vector3cd;
using Mat3 = Eigen::Matrix3cd;

enum class SignClass { Negative, Null, Positive };

const char* to_string(SignClass s);

/// Numeric Hermitian form on C^3.
class HermitianForm {
 public:
  /// Throws MathError unless J is Hermitian (1e-12 relative) and nonsingular.
  explicit HermitianForm(const Mat3& J);
  static HermitianForm standard();  // diag(1, 1, -1)

  const Mat3& matrix() const { return J_; }

  Complex evaluate(const Vec3& z, const Vec3& w) const { return w.adjoint() * J_ * z; }
  double norm(const Vec3& v) const { return evaluate(v, v).real(); }
  SignClass sign_class(const Vec3& v, double rel_tol = 1e-12) const;

  bool same_as(const HermitianForm& other, double tol = 1e-12) const;

 private:
  Mat3 J_;
};

/// 3-vector and 3x3 matrix over F.
using ExactVec = std::array<FieldElement, 3>;

class ExactMat {
 public:
  ExactMat();
  explicit ExactMat(const std::array<FieldElement, 9>& entries) : e_(entries) {}
  static ExactMat identity(const CMField& F);
  static ExactMat diagonal(const FieldElement& a, const FieldElement& b, const FieldElement& c);

  FieldElement& operator()(int i, int j) { return e_[3 * i + j]; }
  const FieldElement& operator()(int i, int j) const { return e_[3 * i + j]; }

  /// CM-conjugate transpose.
  ExactMat adjoint() const;
  FieldElement trace() const;
  FieldElement det() const;
  /// Classical adjugate, equal to det * inverse.
  ExactMat adjugate() const;
  ExactMat inverse() const;
  bool is_identity() const;
  bool is_integral() const;

  Mat3 embed(Embedding e) const;
  Vec3 apply_embedded(const ExactVec& v, Embedding e) const;

  friend ExactMat operator*(const ExactMat& a, const ExactMat& b);
  friend ExactMat operator+(const ExactMat& a, const ExactMat& b);
  friend ExactMat operator-(const ExactMat& a, const ExactMat& b);
  friend ExactVec operator*(const ExactMat& a, const ExactVec& v);
  friend bool operator==(const ExactMat& a, const ExactMat& b) { return a.e_ == b.e_; }

 private:
  std::array<FieldElement, 9> e_;
};

ExactMat pow(const ExactMat& m, int n);
Vec3 embed(const ExactVec& v, Embedding e);

/// Hermitian form with entries in F.
class ExactForm {
 public:
  /// Throws MathError unless J equals its CM-conjugate transpose and det J != 0.
  ExactForm(const CMField& F, const ExactMat& J);

  const CMField& field() const { return F_; }
  const ExactMat& matrix() const { return J_; }

  FieldElement evaluate(const ExactVec& z, const ExactVec& w) const;
  HermitianForm embed(Embedding e) const { return HermitianForm(J_.embed(e)); }

 private:
  CMField F_;
  ExactMat J_;
};

/// <u,v><v,u> / (<u,u><v,v>). Throws MathError on (numerically) null input.
double tance(const HermitianForm& form, const Vec3& u, const Vec3& v);
/// Exact tance, an element of K embedded as a real-valued F element.
FieldElement tance(const ExactForm& form, const ExactVec& u, const ExactVec& v);

struct Signature {
  int positive = 0;
  int negative = 0;
  bool operator==(const Signature&) const = default;
};

/// Eigenvalue sign count with threshold 1e-10; degenerate forms throw MathError.
Signature signature(const HermitianForm& form);
/// Exact signature under sigma1 (or sigma2) from leading principal minors,
/// falling back to eigenvalues when a minor vanishes.
Signature signature(const ExactForm& form, Embedding e);

/// Signature (2,1) under sigma1 and definite under sigma2.
bool is_admissible(const ExactForm& form);

/// T with J = T^H J_std T; the negative direction maps to coordinate 3.
Mat3 cayley_to_std(const HermitianForm& form);

}  // namespace cmball

#include "cmball/hermitian.hpp"

#include <algorithm>
#include <cmath>

#include "cmball/errors.hpp"

namespace cmball {

const char* to_string(SignClass s) {
  switch (s) {
    case SignClass::Negative: return "negative";
    case SignClass::Null: return "null";
    case SignClass::Positive: return "positive";
  }
  return "?";
}

// ------------------------------------------------------------ HermitianForm

HermitianForm::HermitianForm(const Mat3& J) : J_(J) {
  const double scale = std::max(1.0, J.norm());
  if ((J - J.adjoint()).norm() > 1e-12 * scale) {
    throw MathError("matrix is not Hermitian");
  }
  if (std::abs(J.determinant()) < 1e-14 * scale * scale * scale) {
    throw MathError("Hermitian form is degenerate");
  }
}

HermitianForm HermitianForm::standard() {
  Mat3 J = Mat3::Zero();
  J(0, 0) = 1;
  J(1, 1) = 1;
  J(2, 2) = -1;
  return HermitianForm(J);
}

SignClass HermitianForm::sign_class(const Vec3& v, double rel_tol) const {
  double n = norm(v);
  double scale = v.squaredNorm() * J_.norm();
  if (std::abs(n) <= rel_tol * scale) return SignClass::Null;
  return n < 0 ? SignClass::Negative : SignClass::Positive;
}

bool HermitianForm::same_as(const HermitianForm& other, double tol) const {
  return (J_ - other.J_).norm() <= tol * std::max(1.0, J_.norm());
}

// ------------------------------------------------------------------ ExactMat

ExactMat::ExactMat() {
  e_.fill(FieldElement::integer(0));
}

ExactMat ExactMat::identity(const CMField& F) {
  return diagonal(F.one(), F.one(), F.one());
}

ExactMat ExactMat::diagonal(const FieldElement& a, const FieldElement& b, const FieldElement& c) {
  ExactMat m;
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  return m;
}

ExactMat ExactMat::adjoint() const {
  ExactMat m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = (*this)(j, i).cm_conjugate();
  return m;
}

FieldElement ExactMat::trace() const { return e_[0] + e_[4] + e_[8]; }

FieldElement ExactMat::det() const {
  const auto& m = *this;
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

ExactMat ExactMat::adjugate() const {
  const auto& m = *this;
  ExactMat a;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      // cofactor of (j, i)
      int r0 = (j + 1) % 3, r1 = (j + 2) % 3;
      int c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      a(i, j) = m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0);
    }
  }
  return a;
}

ExactMat ExactMat::inverse() const {
  FieldElement d = det();
  if (d.is_zero()) throw MathError("singular matrix");
  ExactMat a = adjugate();
  for (auto& x : a.e_) x = x / d;
  return a;
}

bool ExactMat::is_identity() const {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const auto& x = (*this)(i, j);
      if (i == j ? !(x == FieldElement::integer(1)) : !x.is_zero()) return false;
    }
  return true;
}

bool ExactMat::is_integral() const {
  return std::all_of(e_.begin(), e_.end(), [](const FieldElement& x) { return x.is_integral(); });
}

Mat3 ExactMat::embed(Embedding e) const {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = (*this)(i, j).embed(e);
  return m;
}

Vec3 ExactMat::apply_embedded(const ExactVec& v, Embedding e) const {
  return embed(e) * cmball::embed(v, e);
}

ExactMat operator*(const ExactMat& a, const ExactMat& b) {
  ExactMat c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
  return c;
}

ExactMat operator+(const ExactMat& a, const ExactMat& b) {
  ExactMat c;
  for (int k = 0; k < 9; ++k) c.e_[k] = a.e_[k] + b.e_[k];
  return c;
}

ExactMat operator-(const ExactMat& a, const ExactMat& b) {
  ExactMat c;
  for (int k = 0; k < 9; ++k) c.e_[k] = a.e_[k] - b.e_[k];
  return c;
}

ExactVec operator*(const ExactMat& a, const ExactVec& v) {
  ExactVec r;
  for (int i = 0; i < 3; ++i) r[i] = a(i, 0) * v[0] + a(i, 1) * v[1] + a(i, 2) * v[2];
  return r;
}

ExactMat pow(const ExactMat& m, int n) {
  if (n < 0) return pow(m.inverse(), -n);
  ExactMat result;
  for (int i = 0; i < 3; ++i) result(i, i) = FieldElement::integer(1);
  ExactMat base = m;
  while (n > 0) {
    if (n & 1) result = result * base;
    base = base * base;
    n >>= 1;
  }
  return result;
}

Vec3 embed(const ExactVec& v, Embedding e) {
  return Vec3(v[0].embed(e), v[1].embed(e), v[2].embed(e));
}

// ----------------------------------------------------------------- ExactForm

ExactForm::ExactForm(const CMField& F, const ExactMat& J) : F_(F), J_(J) {
  if (!(J.adjoint() == J)) throw MathError("form matrix is not Hermitian over F");
  if (J.det().is_zero()) throw MathError("Hermitian form is degenerate");
}

FieldElement ExactForm::evaluate(const ExactVec& z, const ExactVec& w) const {
  ExactVec Jz = J_ * z;
  return w[0].cm_conjugate() * Jz[0] + w[1].cm_conjugate() * Jz[1] + w[2].cm_conjugate() * Jz[2];
}

// --------------------------------------------------------------------- tance

double tance(const HermitianForm& form, const Vec3& u, const Vec3& v) {
  if (form.sign_class(u) == SignClass::Null || form.sign_class(v) == SignClass::Null) {
    throw MathError("tance is undefined for null vectors");
  }
  Complex uv = form.evaluate(u, v);
  return std::norm(uv) / (form.norm(u) * form.norm(v));
}

FieldElement tance(const ExactForm& form, const ExactVec& u, const ExactVec& v) {
  FieldElement uu = form.evaluate(u, u);
  FieldElement vv = form.evaluate(v, v);
  if (uu.is_zero() || vv.is_zero()) throw MathError("tance is undefined for null vectors");
  FieldElement uv = form.evaluate(u, v);
  return (uv * uv.cm_conjugate()) / (uu * vv);
}

// ----------------------------------------------------------------- signature

Signature signature(const HermitianForm& form) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(form.matrix(), Eigen::EigenvaluesOnly);
  Signature s;
  for (int i = 0; i < 3; ++i) {
    double ev = es.eigenvalues()(i);
    if (std::abs(ev) < 1e-10) throw MathError("degenerate form: eigenvalue near zero");
    (ev > 0 ? s.positive : s.negative)++;
  }
  return s;
}

Signature signature(const ExactForm& form, Embedding e) {
  const bool first = is_first_pair(e);
  const ExactMat& J = form.matrix();
  std::array<FieldElement, 3> minors = {
      J(0, 0), J(0, 0) * J(1, 1) - J(0, 1) * J(1, 0), J.det()};
  std::array<int, 4> signs{1, 0, 0, 0};
  for (int k = 0; k < 3; ++k) {
    // Leading minors of a Hermitian matrix lie in K.
    signs[k + 1] = minors[k].x().sign(first);
    if (signs[k + 1] == 0) return signature(form.embed(e));
  }
  Signature s;
  for (int k = 0; k < 3; ++k) {
    if (signs[k] != signs[k + 1]) ++s.negative;
  }
  s.positive = 3 - s.negative;
  return s;
}

bool is_admissible(const ExactForm& form) {
  Signature s1 = signature(form, Embedding::Sigma1);
  Signature s2 = signature(form, Embedding::Sigma2);
  bool definite = s2.positive == 3 || s2.negative == 3;
  return s1 == Signature{2, 1} && definite;
}

// -------------------------------------------------------------------- Cayley

Mat3 cayley_to_std(const HermitianForm& form) {
  if (!(signature(form) == Signature{2, 1})) {
    throw MathError("Cayley transform needs a form of signature (2,1)");
  }
  const Mat3& J = form.matrix();
  Mat3 T = Mat3::Zero();

  Mat3 off = J;
  off.diagonal().setZero();
  if (off.norm() <= 1e-14 * J.norm()) {
    // Diagonal form: keep positive coordinates in order, negative one last.
    std::array<int, 3> order{};
    int k = 0;
    for (int i = 0; i < 3; ++i)
      if (J(i, i).real() > 0) order[k++] = i;
    for (int i = 0; i < 3; ++i)
      if (J(i, i).real() < 0) order[k++] = i;
    for (int r = 0; r < 3; ++r) T(r, order[r]) = std::sqrt(std::abs(J(order[r], order[r]).real()));
    return T;
  }

  Eigen::SelfAdjointEigenSolver<Mat3> es(J);
  // Eigen sorts ascending; descending order puts the single negative direction last.
  for (int r = 0; r < 3; ++r) {
    int src = 2 - r;
    Vec3 u = es.eigenvectors().col(src);
    int big = 0;
    for (int i = 1; i < 3; ++i)
      if (std::abs(u(i)) > std::abs(u(big)) + 1e-14) big = i;
    u *= std::conj(u(big)) / std::abs(u(big));
    T.row(r) = std::sqrt(std::abs(es.eigenvalues()(src))) * u.adjoint();
  }
  return T;
}

}  // namespace cmball

#include "cmball/isometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "cmball/errors.hpp"

namespace cmball {

const char* to_string(IsometryLabel l) {
  switch (l) {
    case IsometryLabel::Identity: return "identity";
    case IsometryLabel::ScalarCube: return "scalar_cube_root";
    case IsometryLabel::Loxodromic: return "loxodromic";
    case IsometryLabel::PureParabolic: return "pure_parabolic";
    case IsometryLabel::ScrewParabolic: return "screw_parabolic";
    case IsometryLabel::RegularElliptic: return "regular_elliptic";
    case IsometryLabel::ReflectionAboutPoint: return "reflection_about_point";
    case IsometryLabel::ReflectionAboutLine: return "reflection_about_line";
  }
  return "?";
}

bool is_elliptic(IsometryLabel l) {
  return l == IsometryLabel::RegularElliptic || l == IsometryLabel::ReflectionAboutPoint ||
         l == IsometryLabel::ReflectionAboutLine || l == IsometryLabel::Identity ||
         l == IsometryLabel::ScalarCube;
}

const char* to_string(LocusKind k) {
  switch (k) {
    case LocusKind::WholeBall: return "whole_ball";
    case LocusKind::Point: return "point";
    case LocusKind::Line: return "line";
    case LocusKind::BoundaryPair: return "boundary_pair";
    case LocusKind::BoundaryPoint: return "boundary_point";
  }
  return "?";
}

double unitarity_residual(const Mat3& M, const Mat3& J) {
  return (M.adjoint() * J * M - J).norm();
}

Isometry::Isometry(const Mat3& M, const HermitianForm& form) : M_(M), form_(form) {
  const double m2 = std::max(1.0, M.squaredNorm());
  const double jn = std::max(1.0, form.matrix().norm());
  if (unitarity_residual(M, form.matrix()) > 1e-10 * m2 * jn) {
    throw MathError("matrix does not preserve the Hermitian form");
  }
  if (std::abs(M.determinant() - 1.0) > 1e-10 * m2 * std::sqrt(m2)) {
    throw MathError("matrix does not have determinant 1");
  }
}

ExactIsometry::ExactIsometry(const ExactMat& M, const ExactForm& form) : M_(M), form_(form) {
  if (!(M.adjoint() * form.matrix() * M == form.matrix())) {
    throw MathError("matrix does not preserve the Hermitian form");
  }
  if (!(M.det() == FieldElement::integer(1))) {
    throw MathError("matrix does not have determinant 1");
  }
}

Isometry ExactIsometry::embedded() const {
  return Isometry(M_.embed(Embedding::Sigma1), form_.embed(Embedding::Sigma1));
}

std::array<Complex, 4> char_poly(const Isometry& M) {
  Complex t = M.trace();
  return {1.0, -t, std::conj(t), -1.0};
}

std::array<FieldElement, 4> char_poly(const ExactIsometry& M) {
  FieldElement t = M.trace();
  return {FieldElement::integer(1), -t, t.cm_conjugate(), FieldElement::integer(-1)};
}

double goldman_f(Complex t) {
  double a2 = std::norm(t);
  return a2 * a2 - 8.0 * std::real(t * t * t) + 18.0 * a2 - 27.0;
}

KElement goldman_f(const FieldElement& t) {
  KElement a2 = t.abs2();
  // Under sigma1 rho is purely imaginary, so the real part of t^3 is its K-part.
  KElement re3 = pow(t, 3).x();
  return a2 * a2 - KElement::rational(8) * re3 + KElement::rational(18) * a2 -
         KElement::rational(27);
}

namespace {

constexpr double kFrameTol = 1e-10;
constexpr double kClusterTol = 1e-4;

/// Unit Euclidean norm; the largest component (first on ties) made real positive.
Vec3 normalize_phase(Vec3 v) {
  v /= v.norm();
  int big = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(v(i)) > std::abs(v(big)) + 1e-12) big = i;
  return v * (std::conj(v(big)) / std::abs(v(big)));
}

double scale_of(const Mat3& M) { return std::max(1.0, M.norm()); }

/// Right singular vectors for the d smallest singular values of A.
std::vector<Vec3> null_space(const Mat3& A, int d) {
  Eigen::JacobiSVD<Mat3> svd(A, Eigen::ComputeFullV);
  std::vector<Vec3> out;
  for (int k = 3 - d; k < 3; ++k) out.push_back(svd.matrixV().col(k));
  return out;
}

int nullity(const Mat3& A, double scale) {
  Eigen::JacobiSVD<Mat3> svd(A);
  int n = 0;
  for (int k = 0; k < 3; ++k)
    if (svd.singularValues()(k) < 1e-7 * scale) ++n;
  return n;
}

/// Diagonalizes the restricted Gram matrix; returns vectors in ascending norm order.
std::vector<std::pair<Vec3, double>> j_orthogonalize(const std::vector<Vec3>& basis,
                                                     const Mat3& J) {
  const int k = static_cast<int>(basis.size());
  Eigen::MatrixXcd B(3, k);
  for (int i = 0; i < k; ++i) B.col(i) = basis[i];
  Eigen::MatrixXcd G = B.adjoint() * J * B;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
  std::vector<std::pair<Vec3, double>> out;
  for (int i = 0; i < k; ++i) {
    Vec3 v = B * es.eigenvectors().col(i);
    out.emplace_back(normalize_phase(v), es.eigenvalues()(i));
  }
  return out;
}

Complex rayleigh_eigenvalue(const Mat3& M, const Vec3& v) {
  return v.dot(M * v) / v.squaredNorm();
}

void fill_gram(Eigenframe& fr, const Mat3& J) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) fr.gram(i, j) = fr.vectors[i].adjoint() * J * fr.vectors[j];
  const double tol = kFrameTol * scale_of(J);
  double viol = 0;
  bool ok = true;
  if (fr.loxodromic) {
    for (auto [i, j] : {std::pair{0, 0}, {1, 1}, {0, 2}, {1, 2}}) {
      viol = std::max(viol, std::abs(fr.gram(i, j)));
    }
    ok = viol <= tol && fr.gram(2, 2).real() > tol && std::abs(fr.gram(0, 1)) > tol;
  } else {
    int neg = 0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j)
        if (i != j) viol = std::max(viol, std::abs(fr.gram(i, j)));
      double d = fr.gram(i, i).real();
      if (std::abs(d) <= tol) ok = false;
      if (d < 0) ++neg;
    }
    ok = ok && viol <= tol && neg == 1;
  }
  fr.max_violation = viol;
  fr.pattern_ok = ok;
}

/// Frame with mutually J-orthogonal eigenvectors, negative vector first.
Eigenframe elliptic_frame(std::vector<std::pair<Vec3, Complex>> vecs, const Mat3& J) {
  std::stable_sort(vecs.begin(), vecs.end(), [&](const auto& a, const auto& b) {
    double na = (a.first.adjoint() * J * a.first)(0).real();
    double nb = (b.first.adjoint() * J * b.first)(0).real();
    return (na < 0) > (nb < 0);
  });
  Eigenframe fr;
  for (int i = 0; i < 3; ++i) {
    fr.vectors[i] = vecs[i].first;
    fr.values[i] = vecs[i].second;
  }
  fill_gram(fr, J);
  return fr;
}

/// Numeric structure once the sign of f is known (or left to numerics when
/// f_sign == 2). Exact mode refuses non-diagonalizable input.
IsometryClass classify_with_sign(const Isometry& iso, int f_sign, bool exact_mode) {
  const Mat3& M = iso.matrix();
  const Mat3& J = iso.form().matrix();
  const double sc = scale_of(M);
  IsometryClass out;
  out.f = goldman_f(iso.trace());

  if (f_sign == 2) {
    if (out.f > 1e-9) f_sign = 1;
    else if (out.f < -1e-9) f_sign = -1;
    else f_sign = 0;
  }

  Eigen::ComplexEigenSolver<Mat3> ces(M);
  std::array<Complex, 3> ev;
  for (int i = 0; i < 3; ++i) ev[i] = ces.eigenvalues()(i);
  out.eigenvalues = ev;

  if (f_sign > 0) {
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return std::abs(ev[a]) > std::abs(ev[b]); });
    // (|lambda| > 1, |lambda| < 1, unit modulus)
    std::array<int, 3> order{idx[0], idx[2], idx[1]};
    Eigenframe fr;
    fr.loxodromic = true;
    for (int i = 0; i < 3; ++i) {
      Complex lam = ev[order[i]];
      fr.vectors[i] = normalize_phase(null_space(M - lam * Mat3::Identity(), 1)[0]);
      fr.values[i] = lam;
    }
    fill_gram(fr, J);
    out.label = IsometryLabel::Loxodromic;
    out.eigenvalues = fr.values;
    out.locus = {LocusKind::BoundaryPair, fr.vectors[0], fr.vectors[1]};
    out.frame = fr;
    return out;
  }

  if (f_sign < 0) {
    std::vector<std::pair<Vec3, Complex>> vecs;
    for (int i = 0; i < 3; ++i) {
      vecs.emplace_back(normalize_phase(null_space(M - ev[i] * Mat3::Identity(), 1)[0]), ev[i]);
    }
    std::sort(vecs.begin(), vecs.end(),
              [](const auto& a, const auto& b) { return std::arg(a.second) < std::arg(b.second); });
    Eigenframe fr = elliptic_frame(std::move(vecs), J);
    out.label = IsometryLabel::RegularElliptic;
    out.eigenvalues = fr.values;
    out.locus = {LocusKind::Point, fr.vectors[0], Vec3::Zero()};
    out.frame = fr;
    return out;
  }

  // f = 0: a repeated eigenvalue must be visible.
  auto close = [&](int a, int b) {
    return std::abs(ev[a] - ev[b]) <= kClusterTol * std::max(1.0, std::abs(ev[a]));
  };
  bool c01 = close(0, 1), c02 = close(0, 2), c12 = close(1, 2);
  int nclose = c01 + c02 + c12;

  if (nclose == 0) {
    throw NumericError("borderline: trace invariant is numerically zero but no repeated "
                       "eigenvalue was found; use exact mode");
  }

  if (nclose >= 2 || (c01 && c02) || (c01 && c12) || (c02 && c12)) {
    Complex lam = (ev[0] + ev[1] + ev[2]) / 3.0;
    if ((M - lam * Mat3::Identity()).norm() <= 1e-7 * sc) {
      bool one = std::abs(lam - 1.0) <= 1e-7;
      out.label = one ? IsometryLabel::Identity : IsometryLabel::ScalarCube;
      out.eigenvalues = {lam, lam, lam};
      Eigen::SelfAdjointEigenSolver<Mat3> es(J);
      std::vector<std::pair<Vec3, Complex>> vecs;
      for (int i = 0; i < 3; ++i) vecs.emplace_back(normalize_phase(es.eigenvectors().col(i)), lam);
      Eigenframe fr = elliptic_frame(std::move(vecs), J);
      out.frame = fr;
      out.locus = {LocusKind::WholeBall, Vec3::Zero(), Vec3::Zero()};
      return out;
    }
    if (exact_mode) throw MathError("element is not diagonalizable (parabolic input)");
    out.label = IsometryLabel::PureParabolic;
    out.eigenvalues = {lam, lam, lam};
    int d = std::max(1, nullity(M - lam * Mat3::Identity(), sc));
    auto basis = null_space(M - lam * Mat3::Identity(), d);
    Vec3 fixed = basis[0];
    if (d > 1) {
      auto jo = j_orthogonalize(basis, J);
      auto best = std::min_element(jo.begin(), jo.end(), [](const auto& a, const auto& b) {
        return std::abs(a.second) < std::abs(b.second);
      });
      fixed = best->first;
    }
    out.locus = {LocusKind::BoundaryPoint, normalize_phase(fixed), Vec3::Zero()};
    return out;
  }

  int i = 0, j = 1, k = 2;
  if (c02) { i = 0; j = 2; k = 1; }
  else if (c12) { i = 1; j = 2; k = 0; }
  Complex lam = 0.5 * (ev[i] + ev[j]);
  Complex mu = ev[k];
  Mat3 A = M - lam * Mat3::Identity();
  int dim = nullity(A, sc);

  if (dim >= 2) {
    auto jo = j_orthogonalize(null_space(A, 2), J);
    Vec3 simple = normalize_phase(null_space(M - mu * Mat3::Identity(), 1)[0]);
    std::vector<std::pair<Vec3, Complex>> vecs;
    bool indefinite = jo[0].second < 0 && jo[1].second > 0;
    if (indefinite) {
      vecs = {{jo[0].first, rayleigh_eigenvalue(M, jo[0].first)},
              {jo[1].first, rayleigh_eigenvalue(M, jo[1].first)},
              {simple, mu}};
      Eigenframe fr;
      for (int s = 0; s < 3; ++s) {
        fr.vectors[s] = vecs[s].first;
        fr.values[s] = vecs[s].second;
      }
      fill_gram(fr, J);
      out.label = IsometryLabel::ReflectionAboutLine;
      out.eigenvalues = fr.values;
      out.locus = {LocusKind::Line, simple, Vec3::Zero()};
      out.frame = fr;
      return out;
    }
    vecs = {{simple, mu},
            {jo[0].first, rayleigh_eigenvalue(M, jo[0].first)},
            {jo[1].first, rayleigh_eigenvalue(M, jo[1].first)}};
    Eigenframe fr = elliptic_frame(std::move(vecs), J);
    out.label = IsometryLabel::ReflectionAboutPoint;
    out.eigenvalues = fr.values;
    out.locus = {LocusKind::Point, fr.vectors[0], Vec3::Zero()};
    out.frame = fr;
    return out;
  }

  if (exact_mode) throw MathError("element is not diagonalizable (parabolic input)");
  out.label = IsometryLabel::ScrewParabolic;
  out.eigenvalues = {lam, lam, mu};
  out.locus = {LocusKind::BoundaryPoint, normalize_phase(null_space(A, 1)[0]), Vec3::Zero()};
  return out;
}

}  // namespace

IsometryClass classify(const Isometry& M) { return classify_with_sign(M, 2, false); }

IsometryClass classify(const ExactIsometry& M) {
  int s = goldman_f(M.trace()).sign(true);
  return classify_with_sign(M.embedded(), s, true);
}

Eigenframe eigenframe(const Isometry& M) {
  IsometryClass c = classify(M);
  if (!c.frame) throw MathError("element is not diagonalizable; no eigenframe");
  return *c.frame;
}

std::array<Complex, 3> expansion_terms(const Eigenframe& fr, const HermitianForm& form,
                                       const Vec3& u) {
  const auto& v = fr.vectors;
  Complex uu = form.evaluate(u, u);
  if (fr.loxodromic) {
    Complex w = form.evaluate(u, v[1]) * form.evaluate(v[0], u) / (form.evaluate(v[0], v[1]) * uu);
    return {w, std::conj(w), tance(form, u, v[2])};
  }
  return {tance(form, u, v[0]), tance(form, u, v[1]), tance(form, u, v[2])};
}

Vec3 reconstruct(const Eigenframe& fr, const HermitianForm& form, const Vec3& u) {
  const auto& v = fr.vectors;
  if (fr.loxodromic) {
    return form.evaluate(u, v[1]) / form.evaluate(v[0], v[1]) * v[0] +
           form.evaluate(u, v[0]) / form.evaluate(v[1], v[0]) * v[1] +
           form.evaluate(u, v[2]) / form.evaluate(v[2], v[2]) * v[2];
  }
  Vec3 r = Vec3::Zero();
  for (int j = 0; j < 3; ++j) r += form.evaluate(u, v[j]) / form.evaluate(v[j], v[j]) * v[j];
  return r;
}

Complex trace_from_frames(const Eigenframe& a, const Eigenframe& b, const HermitianForm& form) {
  if (a.loxodromic || b.loxodromic) throw MathError("trace expansion needs elliptic frames");
  Complex s = 0;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k)
      s += a.values[j] * b.values[k] * tance(form, a.vectors[j], b.vectors[k]);
  return s;
}

double displacement(const Isometry& M, const BallPoint& u) {
  const auto& form = M.form();
  Complex r = form.evaluate(M.matrix() * u.rep(), u.rep()) / form.evaluate(u.rep(), u.rep());
  return 2.0 * std::acosh(std::max(1.0, std::abs(r)));
}

double loxodromic_displacement_floor(Complex t) {
  return 2.0 * std::acosh(std::max(1.0, (std::abs(t) - 3.0) / 2.0 + 1.0));
}

int element_order(const Isometry& M, int max_order) {
  Mat3 P = M.matrix();
  for (int n = 1; n <= max_order; ++n) {
    if ((P - Mat3::Identity()).norm() <= 1e-9 * std::max(1.0, P.norm())) return n;
    P = P * M.matrix();
  }
  return 0;
}

namespace {

double unit_ratio(const Isometry& M, const BallPoint& u) {
  const auto& form = M.form();
  return std::abs(form.evaluate(M.matrix() * u.rep(), u.rep()) / form.evaluate(u.rep(), u.rep()));
}

}  // namespace

ProximityCertificate elliptic_proximity(const Isometry& M, const BallPoint& u, double R) {
  IsometryClass c = classify(M);
  if (c.label != IsometryLabel::RegularElliptic && c.label != IsometryLabel::ReflectionAboutPoint) {
    throw MathError(std::string("elliptic proximity needs an isolated fixed point, got ") +
                    to_string(c.label));
  }
  ProximityCertificate pc;
  pc.order = element_order(M, 6);
  double k;
  switch (pc.order) {
    case 2: k = -1.0; break;
    case 3: k = -0.5; break;
    case 4: k = 0.0; break;
    case 6: k = 0.5; break;
    default: throw MathError("elliptic proximity needs order 2, 3, 4 or 6");
  }
  BallPoint v1(c.locus.primary, M.form());
  double ratio = unit_ratio(M, u);
  pc.radius = R;
  pc.d_u_Mu = displacement(M, u);
  pc.d_u_locus = distance(u, v1);
  pc.chain_lhs = 2.0 * tance(M.form(), u.rep(), v1.rep()) - 1.0;
  pc.chain_rhs = 2.0 * (ratio - k) / (1.0 - k) - 1.0;
  pc.chain_ok = pc.chain_lhs <= pc.chain_rhs + 1e-9 * std::max(1.0, std::abs(pc.chain_rhs));
  pc.premise = pc.d_u_Mu < R;
  pc.conclusion = pc.d_u_locus < R;
  pc.holds = !pc.premise || pc.conclusion;
  pc.slack = R - pc.d_u_locus;
  return pc;
}

ProximityCertificate line_proximity(const Isometry& M, const BallPoint& u, double R) {
  IsometryClass c = classify(M);
  if (c.label != IsometryLabel::ReflectionAboutLine) {
    throw MathError(std::string("line proximity needs a reflection about a line, got ") +
                    to_string(c.label));
  }
  const Eigenframe& fr = *c.frame;
  if (std::abs(fr.values[2] / fr.values[0] + 1.0) > 1e-8) {
    throw MathError("line proximity needs eigenvalues proportional to (-1, -1, 1)");
  }
  ComplexLine L(fr.vectors[2], M.form());
  ProximityCertificate pc;
  pc.order = element_order(M, 6);
  pc.radius = R;
  pc.d_u_Mu = displacement(M, u);
  pc.d_u_locus = dist_point_line(u, L);
  pc.chain_lhs = unit_ratio(M, u);
  pc.chain_rhs = 1.0 - 2.0 * tance(M.form(), u.rep(), L.polar());
  pc.chain_ok = std::abs(pc.chain_lhs - pc.chain_rhs) <= 1e-10 * std::max(1.0, pc.chain_rhs);
  pc.premise = pc.d_u_Mu < R;
  pc.conclusion = pc.d_u_locus < R / 2.0;
  pc.holds = !pc.premise || pc.conclusion;
  pc.slack = R / 2.0 - pc.d_u_locus;
  return pc;
}

}  // namespace cmball

#include "cmball/hodge.hpp"

#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "cmball/errors.hpp"

namespace cmball {

namespace {

constexpr int kConjOf[4] = {1, 0, 3, 2};  // block index of the conjugate embedding

Vec3 embed_vec(const ExactVec& v, int block) { return embed(v, kAllEmbeddings[block]); }

}  // namespace

LatticeBasis lattice_basis(const CMField& F) {
  LatticeBasis B{F, {F.one(), F.omega(), F.rho(), F.omega() * F.rho()}, {}};
  for (int i = 0; i < 3; ++i) {
    for (int t = 0; t < 4; ++t) {
      ExactVec e{F.zero(), F.zero(), F.zero()};
      e[i] = B.scalars[t];
      B.vectors[4 * i + t] = e;
    }
  }
  return B;
}

EigenProjections eigenspace_decompose(const LatticeBasis& B) {
  EigenProjections P;
  for (int s = 0; s < 4; ++s) {
    P.blocks[s].setZero();
    for (int k = 0; k < 12; ++k) P.blocks[s].col(k) = embed_vec(B.vectors[k], s);
    P.stacked.block<3, 12>(3 * s, 0) = P.blocks[s];
  }
  // Multiplication by each scalar generator, written in lattice coordinates,
  // must act on block s as multiplication by its s-th embedding.
  const CMField& F = B.field;
  for (const FieldElement& g : B.scalars) {
    Eigen::Matrix<double, 12, 12> act = Eigen::Matrix<double, 12, 12>::Zero();
    for (int i = 0; i < 3; ++i) {
      for (int t = 0; t < 4; ++t) {
        auto c = (g * B.scalars[t]).coordinates();
        for (int u = 0; u < 4; ++u) act(4 * i + u, 4 * i + t) = c[u].get_d();
      }
    }
    for (int s = 0; s < 4; ++s) {
      Complex ge = g.embed(kAllEmbeddings[s]);
      Proj lhs = P.blocks[s] * act.cast<Complex>();
      double r = (lhs - ge * P.blocks[s]).cwiseAbs().maxCoeff();
      P.action_residual = std::max(P.action_residual, r);
    }
  }
  (void)F;
  return P;
}

double conjugation_rule_residual(const EigenProjections& P, int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coef(-5, 5);
  std::normal_distribution<double> gauss;
  double worst = 0;
  for (int n = 0; n < trials; ++n) {
    // Integer combination times a complex scalar, so conj is not the identity.
    Vec12 x;
    Complex scale(gauss(rng), gauss(rng));
    for (int k = 0; k < 12; ++k) x(k) = scale * static_cast<double>(coef(rng));
    Vec12 lhs = P.stacked * x.conjugate();
    Vec12 px = P.stacked * x;
    Vec12 rhs;
    for (int s = 0; s < 4; ++s) rhs.segment<3>(3 * s) = px.segment<3>(3 * kConjOf[s]).conjugate();
    worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  return worst;
}

FieldElement default_polarization_scalar(const CMField& F) {
  FieldElement r = F.rho();
  return r.embed(Embedding::Sigma1).imag() < 0 ? r : -r;
}

void validate_polarization_scalar(const FieldElement& alpha) {
  if (!alpha.context()) throw MathError("polarization scalar needs a field");
  if (!alpha.x().is_zero() || alpha.y().is_zero()) {
    throw MathError("polarization scalar must be purely imaginary and nonzero");
  }
  if (!alpha.is_integral()) throw MathError("polarization scalar must be integral");
  if (!(alpha.embed(Embedding::Sigma1).imag() < 0)) {
    throw MathError("polarization scalar needs negative imaginary part under sigma1");
  }
}

Eigen::Matrix<double, 12, 12> Polarization::as_double() const {
  Eigen::Matrix<double, 12, 12> m;
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) m(i, j) = entries[i][j].get_d();
  return m;
}

mpz_class bareiss_determinant(std::vector<std::vector<mpz_class>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  mpz_class prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && m[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(m[k], m[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        mpz_class t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        m[i][j] = t;
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

namespace {

Rational rational_determinant(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && m[p][k] == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      std::swap(m[k], m[p]);
      det = -det;
    }
    det *= m[k][k];
    for (std::size_t i = k + 1; i < n; ++i) {
      Rational f = m[i][k] / m[k][k];
      for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
    }
  }
  return det;
}

}  // namespace

Polarization polarization_matrix(const LatticeBasis& B, const ExactForm& J,
                                 const FieldElement& alpha) {
  if (!B.field.same_as(J.field())) throw MathError("basis and form use different fields");
  validate_polarization_scalar(alpha);
  Polarization Q;
  for (int k = 0; k < 12; ++k) {
    for (int l = 0; l < 12; ++l) {
      Rational q = (alpha * J.evaluate(B.vectors[k], B.vectors[l])).trace_to_Q();
      Q.entries[k][l] = q;
      if (q.get_den() != 1) {
        Q.integral = false;
        Q.failures.push_back("(" + std::to_string(k) + "," + std::to_string(l) + ") = " +
                             q.get_str());
      }
    }
  }
  for (int k = 0; k < 12; ++k)
    for (int l = 0; l < 12; ++l)
      if (Q.entries[k][l] != -Q.entries[l][k]) Q.skew = false;
  if (Q.integral) {
    std::vector<std::vector<mpz_class>> m(12, std::vector<mpz_class>(12));
    for (int k = 0; k < 12; ++k)
      for (int l = 0; l < 12; ++l) m[k][l] = Q.entries[k][l].get_num();
    Q.det = Rational(bareiss_determinant(std::move(m)));
  } else {
    std::vector<std::vector<Rational>> m(12, std::vector<Rational>(12));
    for (int k = 0; k < 12; ++k)
      for (int l = 0; l < 12; ++l) m[k][l] = Q.entries[k][l];
    Q.det = rational_determinant(std::move(m));
  }
  return Q;
}

Period period_matrix(const Frame6& h, const Polarization& Q) {
  const Mat12 q = Q.as_double().cast<Complex>();
  // Row a is y -> i^{-1} Q(y, conj x_a), which kills conj H^{-1,0}.
  Period p = (q * h.conjugate()).transpose() / Complex(0, 1);
  return p;
}

HodgeFrame hodge_decomposition(const Vec3& v, const LatticeBasis& B, const ExactForm& J,
                               const FieldElement& alpha) {
  if (!B.field.same_as(J.field())) throw MathError("basis and form use different fields");
  if (!is_admissible(J)) throw MathError("form is not admissible");
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (!J.matrix()(i, j).is_integral()) throw MathError("form entries must be integral");
  const Mat3 J1 = J.matrix().embed(Embedding::Sigma1);
  const Mat3 J2 = J.matrix().embed(Embedding::Sigma2);
  const double vv = (v.adjoint() * J1 * v)(0).real();
  if (!(vv < -1e-12 * v.squaredNorm() * J1.norm())) {
    throw MathError("v must be a negative vector under sigma1");
  }

  HodgeFrame fr;
  fr.v = v;
  fr.alpha = alpha;
  fr.polarization = polarization_matrix(B, J, alpha);

  // Eigen-coordinate columns, then pulled back to lattice coordinates.
  Mat12 eig = Mat12::Zero();
  Eigen::Matrix<Complex, 12, 6> cols = Eigen::Matrix<Complex, 12, 6>::Zero();
  cols.block<3, 1>(0, 0) = v;
  // conj sigma1 block: y with y^T J1 v = 0, i.e. conj(y) orthogonal to v.
  Eigen::Matrix<Complex, 1, 3> row = (J1 * v).transpose();
  Eigen::JacobiSVD<Eigen::Matrix<Complex, 1, 3>> svd(row, Eigen::ComputeFullV);
  cols.block<3, 1>(3, 1) = svd.matrixV().col(1);
  cols.block<3, 1>(3, 2) = svd.matrixV().col(2);

  // i^{-1} Q(y, conj y) on the conj sigma2 block is -i conj(sigma2(alpha)) h2(conj y, conj y);
  // take the conjugate block instead when that is negative definite.
  const Complex a2 = alpha.embed(Embedding::Sigma2);
  const double sign2 = (Complex(0, -1) * std::conj(a2)).real();
  Eigen::SelfAdjointEigenSolver<Mat3> es(J2, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()(0), hi = es.eigenvalues()(2);
  const bool definite_pos = lo > 0, definite_neg = hi < 0;
  if (!definite_pos && !definite_neg) throw MathError("form is not definite under sigma2");
  fr.sigma2_swapped = (sign2 > 0) != definite_pos;
  const int block2 = fr.sigma2_swapped ? 2 : 3;
  for (int i = 0; i < 3; ++i) cols(3 * block2 + i, 3 + i) = 1.0;

  EigenProjections P = eigenspace_decompose(B);
  eig = P.stacked;
  fr.h_minus10 = eig.fullPivLu().solve(cols);
  fr.period_matrix = period_matrix(fr.h_minus10, fr.polarization);
  return fr;
}

RiemannReport riemann_check(const HodgeFrame& fr) {
  RiemannReport r;
  const Mat12 q = fr.polarization.as_double().cast<Complex>();
  const Frame6& x = fr.h_minus10;
  Eigen::Matrix<Complex, 6, 6> iso = x.transpose() * q * x;
  r.max_isotropy = iso.cwiseAbs().maxCoeff();
  // G_ab = i^{-1} Q(x_a, conj x_b), Hermitian.
  Eigen::Matrix<Complex, 6, 6> G = (x.transpose() * q * x.conjugate()) / Complex(0, 1);
  Eigen::Matrix<Complex, 6, 6> Gh = 0.5 * (G + G.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Complex, 6, 6>> es(Gh, Eigen::EigenvaluesOnly);
  r.min_eigenvalue = es.eigenvalues()(0);
  Mat12 both;
  both << x, x.conjugate();
  Eigen::JacobiSVD<Mat12> svd(both);
  const auto& sv = svd.singularValues();
  r.union_min_singular = sv(11);
  for (int i = 0; i < 12; ++i)
    if (sv(i) > 1e-9 * sv(0)) ++r.union_rank;
  r.holds = r.max_isotropy < 1e-9 && r.min_eigenvalue > 0 && r.union_rank == 12;
  return r;
}

PeriodReport period_check(const HodgeFrame& fr) {
  PeriodReport out;
  Eigen::JacobiSVD<Period> svd(fr.period_matrix);
  const auto& sv = svd.singularValues();
  out.min_singular = sv(5);
  for (int i = 0; i < 6; ++i)
    if (sv(i) > 1e-8) ++out.rank;
  Eigen::Matrix<double, 12, 12> real;
  real << fr.period_matrix.real(), fr.period_matrix.imag();
  out.lattice_gram_det = (real.transpose() * real).determinant();
  return out;
}

}  // namespace cmball

#pragma once

// Hodge structure of weight -1 on H = O^3 viewed as a rank-12 Z-lattice,
// attached to a point of the ball, together with its integral polarization
// and period matrix.
//
// Lattice coordinates index the basis t * e_i with t in (1, omega, rho,
// omega*rho), ordered as k = 4 i + t. Eigen coordinates stack the four
// embedded triples in the order (sigma1, conj sigma1, sigma2, conj sigma2).

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <gmpxx.h>

#include "cmball/ball.hpp"
#include "cmball/hermitian.hpp"

namespace cmball {

using Mat12 = Eigen::Matrix<Complex, 12, 12>;
using Vec12 = Eigen::Matrix<Complex, 12, 1>;
using Frame6 = Eigen::Matrix<Complex, 12, 6>;
using Period = Eigen::Matrix<Complex, 6, 12>;
using Proj = Eigen::Matrix<Complex, 3, 12>;

struct LatticeBasis {
  CMField field;
  std::array<FieldElement, 4> scalars;  // 1, omega, rho, omega*rho
  std::array<ExactVec, 12> vectors;
};

LatticeBasis lattice_basis(const CMField& F);

struct EigenProjections {
  std::array<Proj, 4> blocks;  // lattice coordinates -> embedded triple
  Mat12 stacked;               // all four blocks, invertible
  double action_residual = 0;  // max |pi(t u) - sigma(t) pi(u)| over generators
};

EigenProjections eigenspace_decompose(const LatticeBasis& B);

/// Largest deviation of P conj(x) from the block swap of conj(P x) over
/// random integer combinations x.
double conjugation_rule_residual(const EigenProjections& P, int trials, std::uint64_t seed);

/// Purely imaginary integral scalar with Im sigma1 < 0: -rho or rho.
FieldElement default_polarization_scalar(const CMField& F);
/// Throws MathError unless alpha is purely imaginary, integral and Im sigma1(alpha) < 0.
void validate_polarization_scalar(const FieldElement& alpha);

struct Polarization {
  std::array<std::array<Rational, 12>, 12> entries;
  bool integral = true;
  bool skew = true;
  Rational det = 0;
  std::vector<std::string> failures;  // non-integral entries, by position

  Eigen::Matrix<double, 12, 12> as_double() const;
};

/// Q_kl = trace_{F/Q}(alpha h(b_k, b_l)) exactly.
Polarization polarization_matrix(const LatticeBasis& B, const ExactForm& J, const FieldElement& alpha);

/// Fraction-free determinant of a square integer matrix.
mpz_class bareiss_determinant(std::vector<std::vector<mpz_class>> m);

struct HodgeFrame {
  Vec3 v;                  // sigma1 representative
  FieldElement alpha;
  Frame6 h_minus10;        // columns in lattice coordinates
  Period period_matrix;    // rows: functionals y -> i^{-1} Q(y, conj x_a)
  bool sigma2_swapped = false;  // sigma2 block used instead of conj sigma2
  Polarization polarization;
};

/// Throws MathError when v is not negative under sigma1(J) or J is not
/// admissible with integral entries.
HodgeFrame hodge_decomposition(const Vec3& v, const LatticeBasis& B, const ExactForm& J,
                               const FieldElement& alpha);

Period period_matrix(const Frame6& h_minus10, const Polarization& Q);

struct RiemannReport {
  double max_isotropy = 0;   // max |Q(x_a, x_b)|
  double min_eigenvalue = 0;  // of the Hermitian Gram i^{-1} Q(x_a, conj x_b)
  int union_rank = 0;        // numeric rank of [H, conj H]
  double union_min_singular = 0;
  bool holds = false;
};

RiemannReport riemann_check(const HodgeFrame& frame);

struct PeriodReport {
  int rank = 0;
  double min_singular = 0;
  double lattice_gram_det = 0;  // det of the real 12x12 period lattice
};

PeriodReport period_check(const HodgeFrame& frame);

}  // namespace cmball

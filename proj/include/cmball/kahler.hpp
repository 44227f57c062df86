#pragma once

// (1,1)-forms on the unit ball in standard coordinates (z, w), represented by
// the 2x2 matrix M(a, b) = omega(d/da, d/d(conj b)). Curve volumes are
// computed by pulling forms back to a parameter disc.

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cmball/ball.hpp"
#include "cmball/quadrature.hpp"

namespace cmball {

using Mat2 = Eigen::Matrix2cd;
using FormEvaluator = std::function<Mat2(Complex z, Complex w)>;

/// tanh^2 of half the distance to the line z = 0: |z|^2 / (1 - |w|^2).
double mu_tilde(Complex z, Complex w);

/// Bergman Kaehler form (holomorphic sectional curvature -1). Throws outside the ball.
Mat2 bergman_form(Complex z, Complex w);
/// i ddbar mu_tilde.
Mat2 ddbar_mu(Complex z, Complex w);
/// i d mu_tilde ^ dbar mu_tilde.
Mat2 dmu_wedge_dbar_mu(Complex z, Complex w);
/// i ddbar F(log mu_tilde) with F(s) = -2 log(1 - e^s), in closed form.
Mat2 omega_F(Complex z, Complex w);
/// Smooth part of i ddbar log mu_tilde away from z = 0.
Mat2 ddbar_log_mu_smooth(Complex z, Complex w);
/// 2 i ddbar(|z|^2 + |w|^2).
Mat2 ddbar_sq_norm(Complex z, Complex w);

/// f''(log mu) A + f'(log mu) B, the decomposition of i ddbar f(log mu).
Mat2 psh_assembly(double fp, double fpp, Complex z, Complex w);
/// The rank-one factors A and B of that decomposition.
std::pair<Mat2, Mat2> psh_factors(Complex z, Complex w);

struct PshSpec {
  std::function<double(double)> fp;   // f'
  std::function<double(double)> fpp;  // f''
  double s_star = 0;                  // upper end of the domain of f
};

struct PshVerdict {
  bool psh = true;
  std::size_t samples = 0;
  double min_eigenvalue = 0;  // scaled by the largest entry at each sample
  bool factors_ok = true;     // A and B have zero determinant and positive trace
  std::optional<std::array<Complex, 2>> witness;
};

/// Samples of {z != 0, log mu_tilde < s_star} from a Halton sequence.
PshVerdict psh_check(const PshSpec& f, std::size_t samples);

/// Deterministic quasi-random interior points of the ball with |p|^2 < 1 - margin.
std::vector<std::array<Complex, 2>> halton_ball_points(std::size_t n, double margin = 1e-6);

struct CurvePatch {
  std::string family;
  std::function<std::array<Complex, 2>(Complex)> phi;
  std::function<std::array<Complex, 2>(Complex)> dphi;
  PolarDomain domain;             // parameter region whose image lies in the ball
  int intersection_with_axis = 0;  // local intersection number with z = 0 at s = 0
  int multiplicity_at_origin = 0;  // multiplicity of the image at (0, 0)
};

CurvePatch line_curve();                 // s -> (s, 0)
CurvePatch graph_curve(int k);           // s -> (s^k, s)
CurvePatch cusp_curve();                 // s -> (s^2, s^3)
CurvePatch reparametrized_line_curve();  // s -> (s^2, 0) on the upper half disc
/// s -> (sum z_j s^j, sum w_j s^j).
CurvePatch polynomial_curve(const std::vector<Complex>& z, const std::vector<Complex>& w);

/// Region in standard coordinates: geodesic ball about `center` or tube about z = 0.
Region std_ball(double r, Complex z0 = 0, Complex w0 = 0);
Region std_tube(double r);

struct PullbackResult {
  double value = 0;
  double error = 0;
  double rho_integration = 0;
  std::size_t cells = 0;
  bool converged = true;
  bool star_shaped = false;  // boundary located per angle instead of cut off
};

/// Integral over {s : phi(s) in R} of 2 phi'^T M conj(phi') dA.
PullbackResult pullback_integral(const CurvePatch& C, const FormEvaluator& form, const Region& R,
                                 const QuadratureSpec& spec = {}, bool parallel = true);

struct HwangToReport {
  double volume = 0;
  double error = 0;
  double normalizer = 0;  // 4 pi sinh^2(r/2) mult
  double ratio = 0;
  bool verdict = false;   // ratio >= 1 - tolerance
};

HwangToReport hwang_to_check(const CurvePatch& C, const BallPoint& center, double r, int mult,
                             double tolerance = 0.005);

struct LelongReport {
  std::vector<double> radii;
  std::vector<double> integrals;
  std::vector<double> errors;
  std::vector<double> ratios;  // integral / (2 sinh^2(r/2))
  double limit = 0;            // r^2-model extrapolation from the two smallest radii
  double target = 0;           // 2 pi (C . L)
  double relative_deviation = 0;
};

/// Throws MathError when fewer than two radii are supplied.
LelongReport lelong_ratio(const CurvePatch& C, std::vector<double> radii = {0.2, 0.1, 0.05});

enum class ScanMode { OmegaFOverSinh2Tube, VolOverCosh2Tube, VolOverCosh2Ball };

const char* to_string(ScanMode m);

enum class StepKind { Increase, Flat, Decrease };

struct MonotonicityReport {
  ScanMode mode;
  std::vector<double> radii;
  std::vector<double> values;  // normalized
  std::vector<double> errors;  // normalized
  std::vector<StepKind> steps;
  bool nondecreasing = true;
  bool inconclusive = false;  // every step flat within error bars
};

MonotonicityReport monotonicity_scan(const CurvePatch& C, ScanMode mode,
                                     const std::vector<double>& radii);

struct StokesCheck {
  double lhs = 0;  // integral of omega_F over the tube
  double rhs = 0;  // 2 sinh^2(r/2) (2 pi (C.L) + smooth part)
  double error = 0;
};

StokesCheck stokes_check(const CurvePatch& C, double r);

struct GenusConstants {
  double ball_divisor = 12;  // pi/12 per isolated elliptic point
  double tube_divisor = 6;   // pi/6 per elliptic line
  int growth_factor = 26;
  int covering_balls = 1;
  int covering_tubes = 24;
};

struct GenusCertificate {
  int genus = 0;
  double sinh2 = 0;
  bool feasible = false;
  double vol_upper = 0;
  bool empty_bound = false;  // vol_upper <= 0: no curve of positive volume
  double feasibility_threshold = 0;
  bool line_feasible = false;  // elliptic-line variant
  double line_vol_upper = 0;
  double line_threshold = 0;
  bool step2_contradiction = false;  // growth factor exceeds the covering count
  std::string note;
};

GenusCertificate genus_certificate(int g, double sinh2, const GenusConstants& k = {});

}  // namespace cmball

#include "cmball/kahler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "cmball/errors.hpp"

namespace cmball {

namespace {

constexpr double kPi = std::numbers::pi;

double inside_norm(Complex z, Complex w) {
  double n2 = std::norm(z) + std::norm(w);
  if (!(n2 < 1.0)) throw MathError("point lies outside the unit ball");
  return n2;
}

Mat2 make(Complex a, Complex b, Complex c, Complex d) {
  Mat2 m;
  m << a, b, c, d;
  return m;
}

}  // namespace

double mu_tilde(Complex z, Complex w) { return std::norm(z) / (1.0 - std::norm(w)); }

Mat2 bergman_form(Complex z, Complex w) {
  double den = 1.0 - inside_norm(z, w);
  double c = 2.0 / (den * den);
  return c * make(1.0 - std::norm(w), std::conj(z) * w, z * std::conj(w), 1.0 - std::norm(z));
}

Mat2 ddbar_mu(Complex z, Complex w) {
  double a = 1.0 - std::norm(w);
  return make(1.0 / a, std::conj(z) * w / (a * a), z * std::conj(w) / (a * a),
              std::norm(z) * (1.0 + std::norm(w)) / (a * a * a));
}

Mat2 dmu_wedge_dbar_mu(Complex z, Complex w) {
  double a = 1.0 - std::norm(w);
  return mu_tilde(z, w) * make(1.0 / a, std::conj(z) * w / (a * a), z * std::conj(w) / (a * a),
                               std::norm(z) * std::norm(w) / (a * a * a));
}

Mat2 omega_F(Complex z, Complex w) {
  double den = 1.0 - inside_norm(z, w);
  double a = 1.0 - std::norm(w);
  double z2 = std::norm(z), w2 = std::norm(w);
  // Lower-right entry from F'' A + F' B; it stays finite at z = 0.
  double d = z2 * (1.0 - z2 - w2 * w2) / (a * a);
  return 2.0 / (den * den) * make(a, std::conj(z) * w, z * std::conj(w), d);
}

Mat2 ddbar_log_mu_smooth(Complex, Complex w) {
  double a = 1.0 - std::norm(w);
  return make(0, 0, 0, 1.0 / (a * a));
}

Mat2 ddbar_sq_norm(Complex, Complex) { return 2.0 * Mat2::Identity(); }

std::pair<Mat2, Mat2> psh_factors(Complex z, Complex w) {
  double a = 1.0 - std::norm(w);
  double z2 = std::norm(z);
  if (z2 == 0) throw MathError("decomposition is singular on z = 0");
  Mat2 A = make(1.0 / z2, std::conj(z) * w / (z2 * a), z * std::conj(w) / (z2 * a),
                std::norm(w) / (a * a));
  return {A, ddbar_log_mu_smooth(z, w)};
}

Mat2 psh_assembly(double fp, double fpp, Complex z, Complex w) {
  auto [A, B] = psh_factors(z, w);
  return fpp * A + fp * B;
}

std::vector<std::array<Complex, 2>> halton_ball_points(std::size_t n, double margin) {
  auto radical_inverse = [](std::size_t i, unsigned base) {
    double f = 1.0, r = 0.0;
    while (i > 0) {
      f /= base;
      r += f * static_cast<double>(i % base);
      i /= base;
    }
    return r;
  };
  std::vector<std::array<Complex, 2>> out;
  out.reserve(n);
  for (std::size_t i = 1; out.size() < n; ++i) {
    Complex z(2 * radical_inverse(i, 2) - 1, 2 * radical_inverse(i, 3) - 1);
    Complex w(2 * radical_inverse(i, 5) - 1, 2 * radical_inverse(i, 7) - 1);
    if (std::norm(z) + std::norm(w) < 1.0 - margin) out.push_back({z, w});
  }
  return out;
}

PshVerdict psh_check(const PshSpec& f, std::size_t samples) {
  PshVerdict v;
  double min_eig = std::numeric_limits<double>::infinity();
  std::size_t idx = 0;
  std::size_t batch = std::max<std::size_t>(samples * 4, 64);
  while (v.samples < samples) {
    auto pts = halton_ball_points(batch);
    for (; idx < pts.size() && v.samples < samples; ++idx) {
      auto [z, w] = pts[idx];
      if (std::norm(z) == 0) continue;
      double s = std::log(mu_tilde(z, w));
      if (!(s < f.s_star)) continue;
      ++v.samples;
      auto [A, B] = psh_factors(z, w);
      for (const Mat2* m : {&A, &B}) {
        double tr = m->trace().real();
        double det = std::abs(m->determinant());
        if (!(tr > 0) || det > 1e-10 * tr * tr) v.factors_ok = false;
      }
      Mat2 M = f.fpp(s) * A + f.fp(s) * B;
      double scale = std::max(1e-300, M.cwiseAbs().maxCoeff());
      Eigen::SelfAdjointEigenSolver<Mat2> es(M, Eigen::EigenvaluesOnly);
      double e = es.eigenvalues()(0) / scale;
      if (e < min_eig) min_eig = e;
      if (e < -1e-12 && !v.witness) {
        v.psh = false;
        v.witness = std::array<Complex, 2>{z, w};
      }
    }
    batch *= 2;
  }
  v.min_eigenvalue = min_eig;
  return v;
}

// ------------------------------------------------------------------ curves

namespace {

/// Smallest x in (0, 1] with g(x) = 1 for g increasing, g(0) < 1.
double solve_increasing(const std::function<double(double)>& g) {
  double lo = 0, hi = 1;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (g(mid) < 1.0 ? lo : hi) = mid;
  }
  return lo;
}

Complex horner(const std::vector<Complex>& c, Complex s) {
  Complex r = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * s + *it;
  return r;
}

std::vector<Complex> derivative(const std::vector<Complex>& c) {
  std::vector<Complex> d;
  for (std::size_t j = 1; j < c.size(); ++j) d.push_back(static_cast<double>(j) * c[j]);
  return d;
}

int vanishing_order(const std::vector<Complex>& c) {
  for (std::size_t j = 0; j < c.size(); ++j)
    if (c[j] != Complex(0)) return static_cast<int>(j);
  return -1;
}

}  // namespace

CurvePatch line_curve() {
  CurvePatch c;
  c.family = "line";
  c.phi = [](Complex s) { return std::array<Complex, 2>{s, 0}; };
  c.dphi = [](Complex) { return std::array<Complex, 2>{1, 0}; };
  c.domain = {1.0, 0, 2 * kPi};
  c.intersection_with_axis = 1;
  c.multiplicity_at_origin = 1;
  return c;
}

CurvePatch graph_curve(int k) {
  if (k < 1) throw MathError("graph exponent must be positive");
  CurvePatch c;
  c.family = "graph";
  c.phi = [k](Complex s) { return std::array<Complex, 2>{std::pow(s, k), s}; };
  c.dphi = [k](Complex s) {
    return std::array<Complex, 2>{static_cast<double>(k) * std::pow(s, k - 1), 1};
  };
  double x = solve_increasing([k](double x) { return std::pow(x, k) + x; });
  c.domain = {std::sqrt(x), 0, 2 * kPi};
  c.intersection_with_axis = k;
  c.multiplicity_at_origin = 1;
  return c;
}

CurvePatch cusp_curve() {
  CurvePatch c;
  c.family = "cusp";
  c.phi = [](Complex s) { return std::array<Complex, 2>{s * s, s * s * s}; };
  c.dphi = [](Complex s) { return std::array<Complex, 2>{2.0 * s, 3.0 * s * s}; };
  double x = solve_increasing([](double x) { return x * x + x * x * x; });
  c.domain = {std::sqrt(x), 0, 2 * kPi};
  c.intersection_with_axis = 2;
  c.multiplicity_at_origin = 2;
  return c;
}

CurvePatch reparametrized_line_curve() {
  CurvePatch c;
  c.family = "reparametrized_line";
  c.phi = [](Complex s) { return std::array<Complex, 2>{s * s, 0}; };
  c.dphi = [](Complex s) { return std::array<Complex, 2>{2.0 * s, 0}; };
  c.domain = {1.0, 0, kPi};
  c.intersection_with_axis = 1;
  c.multiplicity_at_origin = 1;
  return c;
}

CurvePatch polynomial_curve(const std::vector<Complex>& z, const std::vector<Complex>& w) {
  if (z.empty() && w.empty()) throw MathError("polynomial curve needs coefficients");
  int oz = vanishing_order(z), ow = vanishing_order(w);
  if (z.size() <= 1 && w.size() <= 1) throw MathError("polynomial curve is constant");
  if (std::norm(horner(z, 0)) + std::norm(horner(w, 0)) >= 1.0) {
    throw MathError("polynomial curve must start inside the ball");
  }
  CurvePatch c;
  c.family = "polynomial";
  auto dz = derivative(z), dw = derivative(w);
  c.phi = [z, w](Complex s) { return std::array<Complex, 2>{horner(z, s), horner(w, s)}; };
  c.dphi = [dz, dw](Complex s) { return std::array<Complex, 2>{horner(dz, s), horner(dw, s)}; };
  auto reach = [&](double rho) {
    double m = 0;
    for (int j = 0; j < 256; ++j) {
      Complex s = std::polar(rho, 2 * kPi * j / 256);
      m = std::max(m, std::norm(horner(z, s)) + std::norm(horner(w, s)));
    }
    return m;
  };
  double hi = 1.0;
  while (reach(hi) < 1.0) {
    hi *= 2;
    if (hi > 1e6) throw MathError("polynomial curve never leaves the ball");
  }
  double lo = 0;
  for (int i = 0; i < 100; ++i) {
    double mid = 0.5 * (lo + hi);
    (reach(mid) < 1.0 ? lo : hi) = mid;
  }
  c.domain = {lo, 0, 2 * kPi};
  c.intersection_with_axis = oz > 0 ? oz : 0;
  c.multiplicity_at_origin = (oz > 0 || z.empty()) && (ow > 0 || w.empty())
                                 ? std::min(oz < 0 ? 1 << 20 : oz, ow < 0 ? 1 << 20 : ow)
                                 : 0;
  return c;
}

// ----------------------------------------------------------------- regions

Region std_ball(double r, Complex z0, Complex w0) {
  return Region(GeodesicBall{BallPoint::standard(z0, w0), r});
}

Region std_tube(double r) {
  return Region(Tube{ComplexLine(Vec3(1, 0, 0), HermitianForm::standard()), r});
}

// -------------------------------------------------------------- integrals

namespace {

/// Membership in standard coordinates without constructing validated points.
class FastRegion {
 public:
  explicit FastRegion(const Region& R) {
    std::visit(
        [&](const auto& sh) {
          if constexpr (std::is_same_v<std::decay_t<decltype(sh)>, GeodesicBall>) {
            ball_ = true;
            ref_ = sh.center.rep();
            ref_norm_ = -(ref_.dot(J_ * ref_)).real();
            double c = std::cosh(sh.radius / 2);
            bound_ = c * c;
          } else {
            ref_ = sh.line.polar();
            ref_norm_ = (ref_.dot(J_ * ref_)).real();
            double t = std::tanh(sh.radius / 2);
            bound_ = t * t;
          }
        },
        R.shape());
  }

  bool operator()(const std::array<Complex, 2>& p) const {
    double n2 = std::norm(p[0]) + std::norm(p[1]);
    if (!(n2 < 1.0 - 1e-9)) return false;
    double pn = 1.0 - n2;  // -<p, p> for p = (z, w, 1)
    Complex ip = p[0] * std::conj(ref_(0)) + p[1] * std::conj(ref_(1)) - std::conj(ref_(2));
    double cross = std::norm(ip) / (pn * ref_norm_);
    if (ball_) return cross < bound_;  // cosh^2(d/2)
    return cross / (1.0 + cross) < bound_;  // tanh^2(d/2) = sinh^2 / cosh^2
  }

 private:
  const Eigen::Matrix3cd J_ = Eigen::Vector3cd(1, 1, -1).asDiagonal();
  bool ball_ = false;
  Vec3 ref_;
  double ref_norm_ = 1;
  double bound_ = 0;
};

void require_standard(const Region& R) {
  const HermitianForm std_form = HermitianForm::standard();
  bool ok = std::visit(
      [&](const auto& s) {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, GeodesicBall>) {
          return s.center.form().same_as(std_form);
        } else {
          return s.line.form().same_as(std_form);
        }
      },
      R.shape());
  if (!ok) throw MathError("curve integrals use standard coordinates; transport the region first");
}

}  // namespace

PullbackResult pullback_integral(const CurvePatch& C, const FormEvaluator& form, const Region& R,
                                 const QuadratureSpec& spec, bool parallel) {
  require_standard(R);
  const PolarDomain& dom = C.domain;
  const double span = dom.theta_max - dom.theta_min;
  const double rho_cap = dom.rho_max * (1 - 1e-12);
  const FastRegion in_region(R);
  // Stack addresses repeat between calls, so cache entries are tagged by call.
  static std::atomic<std::uint64_t> calls{0};
  const std::uint64_t call_id = ++calls;
  auto inside = [&](double rho, double th) {
    return in_region(C.phi(std::polar(std::min(rho, rho_cap), th)));
  };

  // Sample rays; the region is star-shaped about s = 0 when every ray is an
  // initial segment, and then the boundary can be located per angle.
  constexpr int kRadial = 400, kAngular = 64;
  const double dr = dom.rho_max / kRadial;
  int last = -1;
  bool star = inside(0, dom.theta_min);
  for (int j = 0; j < kAngular; ++j) {
    double th = dom.theta_min + (j + 0.5) * span / kAngular;
    bool left = false;
    for (int i = 0; i <= kRadial; ++i) {
      if (inside(i * dr, th)) {
        last = std::max(last, i);
        if (left) star = false;
      } else {
        left = true;
      }
    }
  }
  PullbackResult out;
  if (last < 0) return out;

  auto density = [&](Complex s) {
    auto p = C.phi(s);
    auto d = C.dphi(s);
    Eigen::Vector2cd v(d[0], d[1]);
    Mat2 M = form(p[0], p[1]);
    return 2.0 * (v.transpose() * M * v.conjugate())(0).real();
  };

  DiscIntegrand f;
  PolarDomain sub{0, dom.theta_min, dom.theta_max};
  if (star) {
    // s = u b(theta) e^{i theta} with u in [0, 1]; area element picks up b^2.
    auto boundary = [&](double th) {
      double lo = 0, hi = dom.rho_max;
      for (int i = 1; i <= 64; ++i) {
        double rho = dom.rho_max * i / 64;
        if (!inside(rho, th)) {
          hi = rho;
          break;
        }
        lo = rho;
      }
      if (lo >= dom.rho_max) return rho_cap;
      for (int it = 0; it < 52; ++it) {
        double mid = 0.5 * (lo + hi);
        (inside(mid, th) ? lo : hi) = mid;
      }
      return lo;
    };
    f = [&, boundary](Complex sh) {
      double u = std::abs(sh);
      double th = std::arg(sh);
      while (th < dom.theta_min) th += 2 * kPi;
      while (th >= dom.theta_min + 2 * kPi) th -= 2 * kPi;
      // Rule nodes revisit each angle; a tiny per-thread cache avoids repeated bisection.
      thread_local std::array<std::pair<double, double>, 8> cache;
      thread_local std::array<std::uint64_t, 8> owner{};
      thread_local std::size_t next = 0;
      double b = -1;
      for (std::size_t k = 0; k < cache.size(); ++k) {
        if (owner[k] == call_id && cache[k].first == th) b = cache[k].second;
      }
      if (b < 0) {
        b = boundary(th);
        owner[next] = call_id;
        cache[next] = {th, b};
        next = (next + 1) % cache.size();
      }
      return density(std::polar(u * b, th)) * b * b;
    };
    sub.rho_max = 1.0;
    out.rho_integration = std::min(dom.rho_max, (last + 1) * dr);
  } else {
    f = [&](Complex s) { return in_region(C.phi(s)) ? density(s) : 0.0; };
    out.rho_integration = std::min(dom.rho_max, (last + 1) * dr);
    sub.rho_max = out.rho_integration;
  }
  QuadratureResult q = parallel ? integrate_polar(f, sub, spec) : integrate_polar_serial(f, sub, spec);
  out.value = q.value;
  out.error = q.error;
  out.cells = q.cells;
  out.converged = q.converged;
  out.star_shaped = star;
  return out;
}

HwangToReport hwang_to_check(const CurvePatch& C, const BallPoint& center, double r, int mult,
                             double tolerance) {
  if (mult < 1) throw MathError("multiplicity must be positive");
  PullbackResult p = pullback_integral(C, bergman_form, Region(GeodesicBall{center, r}));
  HwangToReport h;
  h.volume = p.value;
  h.error = p.error;
  double s = std::sinh(r / 2);
  h.normalizer = 4 * kPi * s * s * mult;
  h.ratio = h.volume / h.normalizer;
  h.verdict = h.ratio >= 1.0 - tolerance;
  return h;
}

LelongReport lelong_ratio(const CurvePatch& C, std::vector<double> radii) {
  if (radii.size() < 2) throw MathError("Lelong extrapolation needs at least two radii");
  LelongReport rep;
  rep.radii = radii;
  for (double r : radii) {
    PullbackResult p = pullback_integral(C, omega_F, std_tube(r));
    double s = std::sinh(r / 2);
    rep.integrals.push_back(p.value);
    rep.errors.push_back(p.error);
    rep.ratios.push_back(p.value / (2 * s * s));
  }
  std::vector<std::size_t> idx(radii.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return radii[a] < radii[b]; });
  double ra = radii[idx[1]], rb = radii[idx[0]];
  if (ra == rb) throw MathError("Lelong extrapolation needs two distinct radii");
  double Ra = rep.ratios[idx[1]], Rb = rep.ratios[idx[0]];
  rep.limit = (ra * ra * Rb - rb * rb * Ra) / (ra * ra - rb * rb);
  rep.target = 2 * kPi * C.intersection_with_axis;
  rep.relative_deviation =
      rep.target > 0 ? std::abs(rep.limit / rep.target - 1.0) : std::abs(rep.limit);
  return rep;
}

const char* to_string(ScanMode m) {
  switch (m) {
    case ScanMode::OmegaFOverSinh2Tube: return "omegaF_over_sinh2_tube";
    case ScanMode::VolOverCosh2Tube: return "vol_over_cosh2_tube";
    case ScanMode::VolOverCosh2Ball: return "vol_over_cosh2_ball";
  }
  return "?";
}

MonotonicityReport monotonicity_scan(const CurvePatch& C, ScanMode mode,
                                     const std::vector<double>& radii) {
  if (!std::is_sorted(radii.begin(), radii.end()) ||
      std::adjacent_find(radii.begin(), radii.end()) != radii.end()) {
    throw MathError("radius grid must be strictly increasing");
  }
  MonotonicityReport rep;
  rep.mode = mode;
  rep.radii = radii;
  for (double r : radii) {
    double norm;
    PullbackResult p;
    if (mode == ScanMode::OmegaFOverSinh2Tube) {
      p = pullback_integral(C, omega_F, std_tube(r));
      double s = std::sinh(r / 2);
      norm = 2 * s * s;
    } else {
      p = pullback_integral(C, bergman_form, mode == ScanMode::VolOverCosh2Tube ? std_tube(r)
                                                                                : std_ball(r));
      double c = std::cosh(r / 2);
      norm = c * c;
    }
    rep.values.push_back(p.value / norm);
    rep.errors.push_back(p.error / norm);
  }
  bool all_flat = true;
  for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
    double diff = rep.values[i + 1] - rep.values[i];
    double bar = rep.errors[i] + rep.errors[i + 1] + 1e-12 * std::abs(rep.values[i]);
    StepKind k = diff > bar ? StepKind::Increase : diff < -bar ? StepKind::Decrease : StepKind::Flat;
    rep.steps.push_back(k);
    if (k == StepKind::Decrease) rep.nondecreasing = false;
    if (k != StepKind::Flat) all_flat = false;
  }
  rep.inconclusive = !rep.steps.empty() && all_flat;
  return rep;
}

StokesCheck stokes_check(const CurvePatch& C, double r) {
  PullbackResult lhs = pullback_integral(C, omega_F, std_tube(r));
  PullbackResult smooth = pullback_integral(C, ddbar_log_mu_smooth, std_tube(r));
  double s = std::sinh(r / 2);
  double k = 2 * s * s;
  StokesCheck out;
  out.lhs = lhs.value;
  out.rhs = k * (2 * kPi * C.intersection_with_axis + smooth.value);
  out.error = lhs.error + k * smooth.error;
  return out;
}

GenusCertificate genus_certificate(int g, double sinh2, const GenusConstants& k) {
  if (g < 0) throw MathError("genus must be nonnegative");
  if (!(sinh2 > 0)) throw MathError("sinh^2(r/2) must be positive");
  GenusCertificate c;
  c.genus = g;
  c.sinh2 = sinh2;
  const double per_point = k.ball_divisor + k.tube_divisor;
  // vol / (4 pi) <= 2g - 2 + per_point vol / (pi S)
  c.feasibility_threshold = 4 * per_point;
  c.feasible = sinh2 > c.feasibility_threshold;
  if (c.feasible) {
    c.vol_upper = (2.0 * g - 2.0) * 4 * kPi * sinh2 / (sinh2 - c.feasibility_threshold);
    c.empty_bound = c.vol_upper <= 0;
  }
  // Elliptic lines: factor 1/2 on the right and only isolated points count.
  c.line_threshold = 2 * k.ball_divisor;
  c.line_feasible = sinh2 > c.line_threshold;
  if (c.line_feasible) {
    c.line_vol_upper = (g - 1.0) * 4 * kPi * sinh2 / (sinh2 - c.line_threshold);
  }
  c.step2_contradiction = k.growth_factor > k.covering_balls + k.covering_tubes;
  if (!c.feasible) {
    c.note = "infeasible: sinh^2(r/2) must exceed " + std::to_string(c.feasibility_threshold);
  } else if (c.empty_bound) {
    c.note = "empty bound: no curve of positive volume";
  } else {
    c.note = "covering data (balls, tubes, growth) taken as assumptions";
  }
  return c;
}

}  // namespace cmball

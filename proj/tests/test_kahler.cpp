#include <array>
#include <cmath>
#include <functional>
#include <numbers>

#include "cmball/errors.hpp"
#include "cmball/kahler.hpp"
#include "doctest.h"

using namespace cmball;

namespace {

constexpr double kPi = std::numbers::pi;
using Potential = std::function<double(Complex, Complex)>;

// i ddbar of a real potential by central differences in real coordinates:
// d_a dbar_b = (d_xa d_xb + d_ya d_yb)/4 + i (d_xa d_yb - d_ya d_xb)/4.
Mat2 fd_ddbar(const Potential& phi, Complex z, Complex w, double h = 1e-4) {
  auto eval = [&](const std::array<double, 4>& x) {
    return phi(Complex(x[0], x[1]), Complex(x[2], x[3]));
  };
  const std::array<double, 4> x0{z.real(), z.imag(), w.real(), w.imag()};
  auto d2 = [&](int u, int v) {
    double s = 0;
    for (int su : {1, -1})
      for (int sv : {1, -1}) {
        auto x = x0;
        x[u] += su * h;
        x[v] += sv * h;
        s += su * sv * eval(x);
      }
    return s / (4 * h * h);
  };
  Mat2 M;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      int xa = 2 * a, ya = 2 * a + 1, xb = 2 * b, yb = 2 * b + 1;
      M(a, b) = Complex(0.25 * (d2(xa, xb) + d2(ya, yb)), 0.25 * (d2(xa, yb) - d2(ya, xb)));
    }
  return M;
}

double mu(Complex z, Complex w) { return std::norm(z) / (1 - std::norm(w)); }

const std::array<std::array<Complex, 2>, 5> kPoints = {{{Complex(0.3, 0.1), Complex(-0.2, 0.4)},
                                                        {Complex(0.05, 0), Complex(0.7, 0.1)},
                                                        {Complex(-0.6, 0.2), Complex(0.1, -0.3)},
                                                        {Complex(0.7, 0.0), Complex(0.0, 0.5)},
                                                        {Complex(0.2, -0.2), Complex(0.2, 0.2)}}};

void check_close(const Mat2& a, const Mat2& b, double tol) {
  double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  CHECK((a - b).cwiseAbs().maxCoeff() < tol * scale);
}

}  // namespace

TEST_SUITE("kahler") {
  TEST_CASE("closed forms agree with finite differences of their potentials") {
    for (auto [z, w] : kPoints) {
      double den = 1 - std::norm(z) - std::norm(w);
      check_close(bergman_form(z, w), fd_ddbar([](Complex a, Complex b) {
                    return -2 * std::log(1 - std::norm(a) - std::norm(b));
                  }, z, w), 1e-5);
      check_close(ddbar_mu(z, w), fd_ddbar(mu, z, w), 1e-5);
      check_close(omega_F(z, w), fd_ddbar([](Complex a, Complex b) {
                    return -2 * std::log(1 - mu(a, b));
                  }, z, w), 1e-5);
      check_close(ddbar_log_mu_smooth(z, w), fd_ddbar([](Complex, Complex b) {
                    return -std::log(1 - std::norm(b));
                  }, z, w), 1e-5);
      check_close(ddbar_sq_norm(z, w), fd_ddbar([](Complex a, Complex b) {
                    return 2 * (std::norm(a) + std::norm(b));
                  }, z, w), 1e-5);
      (void)den;
    }
  }

  TEST_CASE("d mu wedge dbar mu from first derivatives") {
    for (auto [z, w] : kPoints) {
      const double h = 1e-6;
      auto dmu = [&](int a) {  // d/dz_a = (d/dx - i d/dy)/2
        Complex e = a == 0 ? Complex(1, 0) : Complex(0, 0);
        Complex f = a == 1 ? Complex(1, 0) : Complex(0, 0);
        double dx = (mu(z + h * e, w + h * f) - mu(z - h * e, w - h * f)) / (2 * h);
        Complex ie(0, 1);
        double dy = (mu(z + h * ie * e, w + h * ie * f) - mu(z - h * ie * e, w - h * ie * f)) / (2 * h);
        return 0.5 * Complex(dx, -dy);
      };
      Mat2 M;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) M(a, b) = dmu(a) * std::conj(dmu(b));
      check_close(dmu_wedge_dbar_mu(z, w), M, 1e-7);
    }
  }

  TEST_CASE("outside the ball is rejected") {
    CHECK_THROWS_AS(bergman_form(0.8, 0.8), MathError);
    CHECK_THROWS_AS(omega_F(1.0, 0.0), MathError);
  }

  TEST_CASE("psh assembly reproduces ddbar of f(log mu)") {
    for (auto [z, w] : kPoints) {
      // f(s) = e^s gives i ddbar mu.
      double e = mu(z, w);
      check_close(psh_assembly(e, e, z, w), ddbar_mu(z, w), 1e-12);
      // f(s) = s^2.
      double s = std::log(e);
      check_close(psh_assembly(2 * s, 2.0, z, w),
                  fd_ddbar([](Complex a, Complex b) { return std::pow(std::log(mu(a, b)), 2); }, z, w, 1e-5),
                  1e-5);
    }
  }

  TEST_CASE("psh verdicts") {
    PshSpec good{[](double s) { return 2 * std::exp(s) / (1 - std::exp(s)); },
                 [](double s) { return 2 * std::exp(s) / std::pow(1 - std::exp(s), 2); }, 0};
    auto v = psh_check(good, 500);
    CHECK(v.psh);
    CHECK(v.factors_ok);
    CHECK(v.samples == 500);
    PshSpec concave{[](double) { return -1.0; }, [](double) { return 0.0; }, 0};
    auto bad = psh_check(concave, 100);
    CHECK_FALSE(bad.psh);
    CHECK(bad.witness.has_value());
  }

  TEST_CASE("curve patches stay inside the ball") {
    for (const CurvePatch& c : {line_curve(), graph_curve(1), graph_curve(3), cusp_curve(),
                                reparametrized_line_curve(),
                                polynomial_curve({0, 0.5}, {0.1, 0, 0.3})}) {
      for (int j = 0; j < 32; ++j) {
        double th = c.domain.theta_min + (c.domain.theta_max - c.domain.theta_min) * j / 32;
        auto p = c.phi(std::polar(c.domain.rho_max * 0.999, th));
        CHECK(std::norm(p[0]) + std::norm(p[1]) < 1.0);
      }
    }
    // rho^2 = x solves x^2 + x = 1 for the k = 2 graph.
    CHECK(graph_curve(2).domain.rho_max == doctest::Approx(std::sqrt((std::sqrt(5.0) - 1) / 2)));
    CHECK(polynomial_curve({0, 0, 1}, {0.2, 0.5}).intersection_with_axis == 2);
  }

  TEST_CASE("geodesic disc area, centered and off-center") {
    for (double r : {0.3, 1.0}) {
      auto h = hwang_to_check(line_curve(), BallPoint::standard(0, 0), r, 1);
      CHECK(h.ratio == doctest::Approx(1.0).epsilon(1e-6));
    }
    auto off = hwang_to_check(line_curve(), BallPoint::standard(0.3, 0), 1.0, 1);
    CHECK(off.ratio == doctest::Approx(1.0).epsilon(1e-5));
  }

  TEST_CASE("reparametrized line has the same area as the line") {
    auto a = pullback_integral(line_curve(), bergman_form, std_ball(1.2));
    auto b = pullback_integral(reparametrized_line_curve(), bergman_form, std_ball(1.2));
    CHECK(b.value == doctest::Approx(a.value).epsilon(1e-6));
  }

  TEST_CASE("line in a tube: normalized integral is exactly 2 pi") {
    for (double r : {0.1, 0.7, 1.5}) {
      auto p = pullback_integral(line_curve(), omega_F, std_tube(r));
      double s = std::sinh(r / 2);
      CHECK(p.value / (2 * s * s) == doctest::Approx(2 * kPi).epsilon(1e-6));
    }
  }

  TEST_CASE("Stokes identity on graphs") {
    for (int k = 1; k <= 3; ++k) {
      auto s = stokes_check(graph_curve(k), 0.8);
      CHECK(s.lhs == doctest::Approx(s.rhs).epsilon(1e-6));
    }
    auto c = stokes_check(cusp_curve(), 1.0);
    CHECK(c.lhs == doctest::Approx(c.rhs).epsilon(1e-6));
  }

  TEST_CASE("Lelong extrapolation needs two radii") {
    CHECK_THROWS_AS(lelong_ratio(line_curve(), {0.1}), MathError);
    auto L = lelong_ratio(cusp_curve());
    CHECK(L.target == doctest::Approx(4 * kPi));
    CHECK(L.relative_deviation < 0.05);
  }

  TEST_CASE("monotonicity scan flags") {
    auto m = monotonicity_scan(line_curve(), ScanMode::OmegaFOverSinh2Tube, {0.2, 0.4, 0.6});
    CHECK(m.nondecreasing);
    CHECK(m.inconclusive);  // constant 2 pi
    CHECK_THROWS_AS(monotonicity_scan(line_curve(), ScanMode::VolOverCosh2Ball, {0.4, 0.2}), MathError);
  }

  TEST_CASE("genus certificate arithmetic") {
    auto c = genus_certificate(2, 100);
    CHECK(c.feasible);
    CHECK(c.vol_upper == doctest::Approx(200 * kPi / 7).epsilon(1e-13));
    CHECK(c.line_vol_upper == doctest::Approx(1.0 / (1 / (4 * kPi) - 6 / (kPi * 100))).epsilon(1e-12));
    CHECK(c.step2_contradiction);
    CHECK_FALSE(genus_certificate(2, 72).feasible);
    CHECK_FALSE(genus_certificate(2, 50).feasible);
    CHECK(genus_certificate(1, 100).empty_bound);
    CHECK_THROWS_AS(genus_certificate(-1, 100), MathError);
  }
}

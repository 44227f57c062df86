#pragma once

// Adaptive cubature over polar cells of a parameter disc. Each cell uses a
// 5x5 tensor Gauss-Legendre rule; the error estimate compares the cell rule
// against its two possible bisections. Sums are pairwise so a fixed cell
// tree always produces the same bits, serial or parallel.

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace cmball {

struct PolarDomain {
  double rho_max = 1.0;
  double theta_min = 0.0;
  double theta_max = 6.283185307179586;
};

struct QuadratureSpec {
  double rel_tol = 1e-4;
  double abs_tol = 1e-10;
  std::size_t max_cells = 400000;
  int initial_rho = 8;
  int initial_theta = 16;
};

struct QuadratureResult {
  double value = 0;
  double error = 0;
  std::size_t cells = 0;
  int rounds = 0;
  bool converged = false;
};

/// Integrand in the parameter s; the area element rho drho dtheta is applied
/// by the rule. Must be safe to call concurrently.
using DiscIntegrand = std::function<double(std::complex<double>)>;

QuadratureResult integrate_polar(const DiscIntegrand& f, const PolarDomain& dom,
                                 const QuadratureSpec& spec = {});
QuadratureResult integrate_polar_serial(const DiscIntegrand& f, const PolarDomain& dom,
                                        const QuadratureSpec& spec = {});

/// Pairwise (cascade) sum, independent of thread count.
double pairwise_sum(const double* x, std::size_t n);
inline double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()); }

}  // namespace cmball

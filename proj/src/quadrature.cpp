#include "cmball/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "cmball/errors.hpp"

namespace cmball {

double pairwise_sum(const double* x, std::size_t n) {
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

namespace {

constexpr std::array<double, 5> kNodes = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                          0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kWeights = {0.2369268850561891, 0.4786286704993665,
                                            0.5688888888888889, 0.4786286704993665,
                                            0.2369268850561891};

struct Cell {
  double r0, r1, t0, t1;
  double value = 0;
  double error = 0;
  bool split_rho = true;
};

double rule(const DiscIntegrand& f, double r0, double r1, double t0, double t1) {
  const double hr = 0.5 * (r1 - r0), cr = 0.5 * (r1 + r0);
  const double ht = 0.5 * (t1 - t0), ct = 0.5 * (t1 + t0);
  double s = 0;
  for (int i = 0; i < 5; ++i) {
    double rho = cr + hr * kNodes[i];
    double row = 0;
    for (int j = 0; j < 5; ++j) {
      double th = ct + ht * kNodes[j];
      row += kWeights[j] * f(std::polar(rho, th));
    }
    s += kWeights[i] * rho * row;
  }
  return s * hr * ht;
}

void evaluate(const DiscIntegrand& f, Cell& c) {
  const double rm = 0.5 * (c.r0 + c.r1), tm = 0.5 * (c.t0 + c.t1);
  c.value = rule(f, c.r0, c.r1, c.t0, c.t1);
  double by_rho = rule(f, c.r0, rm, c.t0, c.t1) + rule(f, rm, c.r1, c.t0, c.t1);
  double by_theta = rule(f, c.r0, c.r1, c.t0, tm) + rule(f, c.r0, c.r1, tm, c.t1);
  double er = std::abs(c.value - by_rho), et = std::abs(c.value - by_theta);
  c.error = std::max(er, et);
  c.split_rho = er >= et;
  // Finer estimate: the refined bisection is at least as accurate as the cell rule.
  c.value = c.split_rho ? by_rho : by_theta;
}

template <bool Parallel>
QuadratureResult run(const DiscIntegrand& f, const PolarDomain& dom, const QuadratureSpec& spec) {
  if (!(dom.rho_max >= 0) || !(dom.theta_max > dom.theta_min)) {
    throw MathError("invalid polar domain");
  }
  QuadratureResult res;
  if (dom.rho_max == 0) {
    res.converged = true;
    return res;
  }
  std::vector<Cell> cells;
  const int nr = std::max(1, spec.initial_rho), nt = std::max(1, spec.initial_theta);
  const double dr = dom.rho_max / nr, dt = (dom.theta_max - dom.theta_min) / nt;
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nt; ++j)
      cells.push_back({i * dr, (i + 1) * dr, dom.theta_min + j * dt, dom.theta_min + (j + 1) * dt});

  auto eval_all = [&](std::vector<Cell>& cs) {
    const long n = static_cast<long>(cs.size());
    if constexpr (Parallel) {
#pragma omp parallel for schedule(dynamic, 16)
      for (long i = 0; i < n; ++i) evaluate(f, cs[i]);
    } else {
      for (long i = 0; i < n; ++i) evaluate(f, cs[i]);
    }
  };
  eval_all(cells);

  std::vector<double> buf;
  for (;;) {
    ++res.rounds;
    buf.resize(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) buf[i] = cells[i].value;
    res.value = pairwise_sum(buf);
    for (std::size_t i = 0; i < cells.size(); ++i) buf[i] = cells[i].error;
    res.error = pairwise_sum(buf);
    res.cells = cells.size();
    if (res.error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(res.value))) {
      res.converged = true;
      break;
    }
    if (cells.size() >= spec.max_cells) break;

    double max_err = 0;
    for (const Cell& c : cells) max_err = std::max(max_err, c.error);
    const double cut = 0.25 * max_err;

    std::vector<Cell> next;
    std::vector<std::size_t> fresh;
    next.reserve(cells.size() * 2);
    for (const Cell& c : cells) {
      if (c.error < cut) {
        next.push_back(c);
        continue;
      }
      Cell a = c, b = c;
      if (c.split_rho) {
        a.r1 = b.r0 = 0.5 * (c.r0 + c.r1);
      } else {
        a.t1 = b.t0 = 0.5 * (c.t0 + c.t1);
      }
      fresh.push_back(next.size());
      next.push_back(a);
      fresh.push_back(next.size());
      next.push_back(b);
    }
    std::vector<Cell> todo;
    todo.reserve(fresh.size());
    for (std::size_t k : fresh) todo.push_back(next[k]);
    eval_all(todo);
    for (std::size_t k = 0; k < fresh.size(); ++k) next[fresh[k]] = todo[k];
    cells.swap(next);
  }
  return res;
}

}  // namespace

QuadratureResult integrate_polar(const DiscIntegrand& f, const PolarDomain& dom,
                                 const QuadratureSpec& spec) {
  return run<true>(f, dom, spec);
}

QuadratureResult integrate_polar_serial(const DiscIntegrand& f, const PolarDomain& dom,
                                        const QuadratureSpec& spec) {
  return run<false>(f, dom, spec);
}

}  // namespace cmball

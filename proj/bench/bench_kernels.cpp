// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <cmath>

#include "cmball/lattice.hpp"
#include "cmball/quadrature.hpp"

using namespace cmball;

namespace {

double wiggle(std::complex<double> s) {
  return std::cos(5 * s.real()) * std::exp(-std::norm(s - 0.3)) / (1.0 - 0.9 * std::norm(s));
}

const QuadratureSpec kTight{1e-9, 1e-13};

void BM_quadrature_serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(integrate_polar_serial(wiggle, PolarDomain{0.95}, kTight));
}

void BM_quadrature_parallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(integrate_polar(wiggle, PolarDomain{0.95}, kTight));
}

const ArithmeticLattice& lattice5() {
  static const CMField F(5, -11, 0);
  static const ArithmeticLattice L(F, diagonal_sqrtD_form(F));
  return L;
}

void BM_torsion_serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(torsion_search_serial(lattice5(), 1));
}

void BM_torsion_parallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(torsion_search(lattice5(), 1));
}

}  // namespace

BENCHMARK(BM_quadrature_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_quadrature_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_torsion_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_torsion_parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

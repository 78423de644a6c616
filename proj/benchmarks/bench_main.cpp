#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "elsgd/akaike.hpp"
#include "elsgd/parallel.hpp"
#include "elsgd/phase_retrieval.hpp"
#include "elsgd/quadratic.hpp"
#include "elsgd/quartic.hpp"
#include "elsgd/roc.hpp"

namespace {

using namespace elsgd;

Spectrum spread_spectrum(std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::pow(1e-3, double(i) / double(n - 1));
  return Spectrum::make(v);
}

void BM_GdStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto spec = spread_spectrum(n);
  StateVector x = StateVector::Ones(static_cast<Eigen::Index>(n));
  for (auto _ : state) {
    StateVector y = gd_step(x, spec);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_GdStep)->Arg(3)->Arg(64)->Arg(4096);

void BM_TMap(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto spec = spread_spectrum(n);
  const SimplexPoint p(Vector::Constant(static_cast<Eigen::Index>(n), 1.0 / double(n)));
  for (auto _ : state) {
    auto q = t_map(p, spec);
    benchmark::DoNotOptimize(q);
  }
}
BENCHMARK(BM_TMap)->Arg(3)->Arg(64)->Arg(4096);

void BM_LimitProbability(benchmark::State& state) {
  const auto spec = Spectrum::make({1.0, 0.505, 0.01});
  auto rng = make_stream(1, 0);
  std::vector<SimplexPoint> starts;
  for (int i = 0; i < 256; ++i) starts.push_back(sigma(sample_unit_sphere(3, rng), spec));
  std::size_t k = 0;
  for (auto _ : state) {
    auto r = limit_probability(starts[k++ % starts.size()], spec);
    benchmark::DoNotOptimize(r.s);
  }
}
BENCHMARK(BM_LimitProbability);

void BM_AverageRocQuadrature(benchmark::State& state) {
  const double a = std::pow(10.0, -double(state.range(0)));
  for (auto _ : state) {
    auto r = average_roc_quadrature_2d(a, Moment::First);
    benchmark::DoNotOptimize(r.mean);
  }
}
BENCHMARK(BM_AverageRocQuadrature)->DenseRange(1, 6, 1);

void BM_MinimizeQuartic(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  std::vector<QuarticPoly> polys(1024);
  for (auto& q : polys) {
    q.c4 = std::abs(normal(rng)) + 0.1;
    q.c3 = normal(rng);
    q.c2 = normal(rng);
    q.c1 = -std::abs(normal(rng));
    q.c0 = normal(rng);
  }
  std::size_t k = 0;
  for (auto _ : state) {
    auto r = minimize_quartic_nonneg(polys[k++ % polys.size()]);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_MinimizeQuartic);

void BM_PhaseRetrievalPipeline(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto inst = gen_phase_retrieval(n, 10 * n, 1);
  const Vector x = Vector::Ones(static_cast<Eigen::Index>(n)) / std::sqrt(double(n));
  for (auto _ : state) {
    auto d = pr_descent_pipeline(inst, x);
    benchmark::DoNotOptimize(d.quartic.c0);
  }
}
BENCHMARK(BM_PhaseRetrievalPipeline)->Arg(100)->Arg(400);

void BM_PhaseRetrievalGradientOnly(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto inst = gen_phase_retrieval(n, 10 * n, 1);
  const Vector x = Vector::Ones(static_cast<Eigen::Index>(n)) / std::sqrt(double(n));
  for (auto _ : state) {
    auto d = pr_gradient_pipeline(inst, x);
    benchmark::DoNotOptimize(d.value);
  }
}
BENCHMARK(BM_PhaseRetrievalGradientOnly)->Arg(100)->Arg(400);

}  // namespace

BENCHMARK_MAIN();

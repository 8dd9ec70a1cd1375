#include <benchmark/benchmark.h>

#include <random>

#include "folia/diophantine.hpp"
#include "folia/homology.hpp"
#include "folia/leafwise.hpp"
#include "folia/mapping_torus.hpp"
#include "folia/models.hpp"

namespace {

using namespace folia;

PoissonModel symplectic_t2() {
  Eigen::MatrixXd p(2, 2);
  p << 0, 1, -1, 0;
  return PoissonModel(ConstantTorusModel(p));
}

MappingTorusModel cat_map() {
  Eigen::Matrix2i a;
  a << 2, 1, 1, 1;
  return MappingTorusModel(a);
}

void bm_trig_mul(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto f = random_real_trig_polynomial(2, static_cast<int>(state.range(0)), rng, 48);
  const auto g = random_real_trig_polynomial(2, static_cast<int>(state.range(0)), rng, 48);
  for (auto _ : state) {
    benchmark::DoNotOptimize(f * g);
  }
}
BENCHMARK(bm_trig_mul)->Arg(4)->Arg(8)->Arg(16);

void bm_bracket(benchmark::State& state) {
  const auto model = symplectic_t2();
  std::mt19937_64 rng(2);
  const auto f = random_real_trig_polynomial(2, 6, rng, 48);
  const auto g = random_real_trig_polynomial(2, 6, rng, 48);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bracket(model, f, g));
  }
}
BENCHMARK(bm_bracket);

void bm_top_dim_estimate(benchmark::State& state) {
  const auto model = symplectic_t2();
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_h_top_dim(model, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(bm_top_dim_estimate)->Arg(8)->Arg(16)->Arg(32);

void bm_mt_solve(benchmark::State& state) {
  const auto model = cat_map();
  std::mt19937_64 rng(3);
  const auto f = random_equivariant_function(model, 8, static_cast<int>(state.range(0)), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_mt_top_primitive(model, f));
  }
}
BENCHMARK(bm_mt_solve)->Arg(32)->Arg(64)->Arg(128);

void bm_min_divisor(benchmark::State& state) {
  const double golden = 0.6180339887498949;
  for (auto _ : state) {
    benchmark::DoNotOptimize(min_divisor(golden, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(bm_min_divisor)->Arg(8)->Arg(32)->Arg(64);

}  // namespace

BENCHMARK_MAIN();

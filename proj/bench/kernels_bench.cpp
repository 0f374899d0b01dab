// Serial reference loops against their OpenMP counterparts, per kernel and
// for a whole propagation step. Thread count follows OMP_NUM_THREADS.
#include <benchmark/benchmark.h>

#include <random>

#include "ambec/catalog.hpp"
#include "ambec/constraints.hpp"
#include "ambec/kernels.hpp"
#include "ambec/propagator.hpp"

namespace {

using namespace ambec;
namespace k = ambec::kernels;

ComplexField random_field(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  ComplexField f(n);
  for (auto& v : f) v = {d(rng), d(rng)};
  return f;
}

k::Exec exec_of(const benchmark::State& st) {
  return st.range(1) == 0 ? k::Exec::kSerial : k::Exec::kParallel;
}

void label(benchmark::State& st) {
  st.SetLabel(st.range(1) == 0 ? "serial" : "openmp");
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_LocalRhs(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const ComplexField a = random_field(n, 1), m = random_field(n, 2);
  ComplexField da(n), dm(n);
  const Couplings c{-1.0, 0.5, 0.8, 1.2, -0.3};
  for (auto _ : st) {
    k::local_rhs(exec_of(st), {c, {}, {}}, a, m, da, dm);
    benchmark::DoNotOptimize(da.data());
  }
  label(st);
}

void BM_FdSecondDifference(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const ComplexField a = random_field(n, 3);
  ComplexField out(n);
  for (auto _ : st) {
    k::fd_second_difference(exec_of(st), a, 0.01, out);
    benchmark::DoNotOptimize(out.data());
  }
  label(st);
}

void BM_WeightedNumber(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const ComplexField a = random_field(n, 4), m = random_field(n, 5);
  for (auto _ : st) benchmark::DoNotOptimize(k::weighted_number(exec_of(st), a, m, {}));
  label(st);
}

void BM_StrangStep(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const Preset p = preset(Family::kHyperbolicGround, "repulsive");
  const ConstraintSolution s = solve(p.problem, p.guess);
  const Grid g = make_grid(-40, 40, n);
  FieldPair f = eval_family(Family::kHyperbolicGround, s.values.shape(), s.values.mu(), g, 0.0);
  const k::Exec saved = k::default_exec();
  k::set_default_exec(exec_of(st));
  StrangStepper stepper(g, Potential::zero(), s.values.couplings(), 1e-3);
  for (auto _ : st) stepper.step(f);
  k::set_default_exec(saved);
  label(st);
}

void BM_FdRk4Step(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const Preset p = preset(Family::kPulseGround);
  const ConstraintSolution s = solve(p.problem, p.guess);
  const Grid g = make_grid(-80, 80, n, Discretization::kFiniteDifference);
  FieldPair f = eval_family(Family::kPulseGround, s.values.shape(), s.values.mu(), g, 0.0);
  const k::Exec saved = k::default_exec();
  k::set_default_exec(exec_of(st));
  FdRk4Stepper stepper(g, Potential::zero(), s.values.couplings(), 0.5 * fd_cfl_limit(g), s.values.mu());
  for (auto _ : st) stepper.step(f);
  k::set_default_exec(saved);
  label(st);
}

void sizes(benchmark::internal::Benchmark* b) {
  for (long n : {1L << 11, 1L << 14, 1L << 17})
    for (long e : {0L, 1L}) b->Args({n, e});
}

void step_sizes(benchmark::internal::Benchmark* b) {
  for (long n : {1L << 11, 1L << 13})
    for (long e : {0L, 1L}) b->Args({n, e});
}

}  // namespace

BENCHMARK(BM_LocalRhs)->Apply(sizes);
BENCHMARK(BM_FdSecondDifference)->Apply(sizes);
BENCHMARK(BM_WeightedNumber)->Apply(sizes);
BENCHMARK(BM_StrangStep)->Apply(step_sizes);
BENCHMARK(BM_FdRk4Step)->Apply(step_sizes);

BENCHMARK_MAIN();

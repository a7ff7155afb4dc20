// Microbenchmarks for the hot paths: phase integration, acceleration
// objectives, frame construction, and constellation root finding.
#include <benchmark/benchmark.h>

#include "spinphase/brachistophase.hpp"
#include "spinphase/majorana.hpp"
#include "spinphase/phase.hpp"

using namespace spinphase;

namespace {

Curve make_curve(int n, std::uint64_t seed) {
  Rng rng(seed);
  const Matrix h = constraint_project(random_hermitian(n, rng));
  return Curve::schroedinger(h, ProjectorState::from_ket(random_state(n, rng)));
}

void BM_GeometricPhase(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Curve c = make_curve(n, 12);
  for (auto _ : state)
    benchmark::DoNotOptimize(geometric_phase_value(c, 1.0, 256));
}
BENCHMARK(BM_GeometricPhase)->Arg(2)->Arg(4)->Arg(8);

void BM_AccelObjective(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(5);
  const Matrix h = constraint_project(random_hermitian(n, rng));
  const ProjectorState rho0 = ProjectorState::from_ket(random_state(n, rng));
  for (auto _ : state) benchmark::DoNotOptimize(accel_objective(h, rho0));
}
BENCHMARK(BM_AccelObjective)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_AccelSuperopRoute(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(5);
  const Matrix h = constraint_project(random_hermitian(n, rng));
  const ProjectorState rho0 = ProjectorState::from_ket(random_state(n, rng));
  for (auto _ : state) benchmark::DoNotOptimize(accel_norm_sq_routes(h, rho0));
}
BENCHMARK(BM_AccelSuperopRoute)->Arg(2)->Arg(4)->Arg(8);

void BM_CovariantJet(benchmark::State& state) {
  const Curve c = make_curve(static_cast<int>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(covariant_jet(c, 0.0));
}
BENCHMARK(BM_CovariantJet)->Arg(2)->Arg(4)->Arg(8);

void BM_VTildeSeries(benchmark::State& state) {
  const Curve c = make_curve(static_cast<int>(state.range(0)), 9);
  for (auto _ : state) benchmark::DoNotOptimize(vtilde_expansion(c, 4));
}
BENCHMARK(BM_VTildeSeries)->Arg(2)->Arg(4)->Arg(8);

void BM_Constellation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(3);
  const PureState psi = random_state(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(constellation(psi));
}
BENCHMARK(BM_Constellation)->Arg(3)->Arg(5)->Arg(9);

}  // namespace

BENCHMARK_MAIN();

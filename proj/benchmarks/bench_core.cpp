// Microbenchmarks for the hot paths: stencil application, explicit stepping,
// the model forward pass and one full training epoch.

#include <benchmark/benchmark.h>

#include "fcnn/equations.hpp"
#include "fcnn/evaluation.hpp"
#include "fcnn/grid.hpp"
#include "fcnn/ic.hpp"
#include "fcnn/model.hpp"
#include "fcnn/training.hpp"

namespace {

using namespace fcnn;

constexpr double kH = 0.01;

Field random_field(int n) { return ic_random(n, n, 0.1, 42); }

void BM_PadNeumann(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Field field = random_field(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pad_neumann(field));
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_PadNeumann)->Arg(100)->Arg(400);

void BM_Laplacian5pt(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Field field = random_field(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(laplacian_5pt(field, kH));
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_Laplacian5pt)->Arg(100)->Arg(400);

void BM_FdmStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const EquationSpec spec = EquationSpec::defaults(EquationKind::AllenCahn);
  const double dt = stability_dt(spec, kH);
  const Field field = random_field(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fdm_step(field, spec, dt, kH));
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_FdmStep)->Arg(100)->Arg(400);

void BM_Forward(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const EquationSpec spec = EquationSpec::defaults(EquationKind::AllenCahn);
  const double dt = stability_dt(spec, kH);
  const Model model = analytic_model(spec, dt, kH);
  const Field field = random_field(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward(model, field));
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_Forward)->Arg(100)->Arg(400);

void BM_GradientEpoch(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const EquationSpec spec = EquationSpec::defaults(EquationKind::AllenCahn);
  const double dt = stability_dt(spec, kH);
  const SnapshotPair pair = make_pair(spec, n, n, dt, kH, 7, 0.0);
  const Model model = init_model(spec.poly_order, 0.0, 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gradients(model, pair.u0, pair.u1));
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_GradientEpoch)->Arg(100);

void BM_RolloutError(benchmark::State& state) {
  const EquationSpec spec = EquationSpec::defaults(EquationKind::Heat);
  const double dt = stability_dt(spec, kH);
  const Model model = analytic_model(spec, dt, kH);
  const Field ic = random_field(100);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        rollout_error(model, spec, dt, kH, ic, 50, ErrorAt::Final));
  }
}
BENCHMARK(BM_RolloutError);

}  // namespace

BENCHMARK_MAIN();

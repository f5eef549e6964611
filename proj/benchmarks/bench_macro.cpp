#include <benchmark/benchmark.h>

#include <random>

#include "fecim/array_chgfe.hpp"
#include "fecim/device_models.hpp"
#include "fecim/macro_engine.hpp"
#include "fecim/oracles.hpp"

using namespace fecim;

namespace {

IntMatrix random_matrix(std::mt19937_64& gen) {
  IntMatrix w(128, 16, 8);
  for (int& v : w.values) v = static_cast<int>(gen() % 256) - 128;
  return w;
}

std::vector<int> random_input(std::mt19937_64& gen, int bits) {
  std::vector<int> x(128);
  for (int& v : x) v = static_cast<int>(gen() % (1u << bits));
  return x;
}

void BM_Matvec(benchmark::State& state) {
  MacroConfig cfg;
  cfg.kind = state.range(0) == 0 ? MacroKind::CurFe : MacroKind::ChgFe;
  const int bits = static_cast<int>(state.range(1));
  std::mt19937_64 gen(7);
  const ProgrammedMacro macro = program_macro(random_matrix(gen), cfg);
  const auto x = random_input(gen, bits);
  for (auto _ : state) benchmark::DoNotOptimize(matvec(macro, x, bits));
  state.SetItemsProcessed(state.iterations() * 128 * 16);
  state.SetLabel(to_string(cfg.kind));
}
BENCHMARK(BM_Matvec)->ArgsProduct({{0, 1}, {1, 4, 8}});

void BM_ExactDot(benchmark::State& state) {
  std::mt19937_64 gen(8);
  const IntMatrix w = random_matrix(gen);
  const auto x = random_input(gen, 8);
  const auto col = w.column(0);
  for (auto _ : state) benchmark::DoNotOptimize(exact_dot(x, col));
}
BENCHMARK(BM_ExactDot);

void BM_CellCurrent(benchmark::State& state) {
  const NFeFET1RModel model;
  double dev = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cell_current_curfe(model, 2, false, true, true, dev));
    dev += 1e-9;
  }
}
BENCHMARK(BM_CellCurrent);

void BM_ChgfeStep(benchmark::State& state) {
  const MlcFeFETModel model;
  const ChgfeParams p;
  double dev = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cell_delta_v_chgfe(model, 2, false, true, true, dev, p.t_eval, p.bl_capacitance));
    dev += 1e-9;
  }
}
BENCHMARK(BM_ChgfeStep);

void BM_SampleVth(benchmark::State& state) {
  std::uint32_t row = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_vth(1, row++, 3, 0.04));
}
BENCHMARK(BM_SampleVth);

void BM_MonteCarloTransfer(benchmark::State& state) {
  MacroConfig cfg;
  cfg.kind = state.range(0) == 0 ? MacroKind::CurFe : MacroKind::ChgFe;
  const int trials = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo_transfer(cfg, BlockKind::L4B, trials));
  state.SetLabel(to_string(cfg.kind));
}
BENCHMARK(BM_MonteCarloTransfer)->ArgsProduct({{0, 1}, {4}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

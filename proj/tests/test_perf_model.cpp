#include <gtest/gtest.h>

#include <sstream>

#include "fecim/errors.hpp"
#include "fecim/perf_model.hpp"

using namespace fecim;

namespace {

MacroConfig of(MacroKind k) {
  MacroConfig c;
  c.kind = k;
  return c;
}

}  // namespace

TEST(PerfModel, OpsPerMatvec) { EXPECT_EQ(ops_per_matvec(MacroConfig{}), 4096.0); }

TEST(PerfModel, CalibratedAnchors) {
  EXPECT_NEAR(efficiency_tops_per_watt(of(MacroKind::CurFe), 8, 8), 12.18, 12.18 * 1e-9);
  EXPECT_NEAR(efficiency_tops_per_watt(of(MacroKind::ChgFe), 8, 8), 14.47, 14.47 * 1e-9);
}

TEST(PerfModel, FixedSharesOfChgfeBudget) {
  const EnergyBreakdown e = energy_breakdown(of(MacroKind::ChgFe), 8, 8);
  EXPECT_NEAR(e.digital / e.total(), 0.05, 1e-9);
  EXPECT_NEAR(e.driver / e.total(), 0.05, 1e-9);
  EXPECT_GT(e.array, 0.0);
  EXPECT_GT(e.adc, 0.0);
}

TEST(PerfModel, EfficiencyTrends) {
  for (MacroKind k : {MacroKind::CurFe, MacroKind::ChgFe}) {
    for (int wb : {4, 8}) {
      double prev = 1e300;
      for (int ib : {1, 2, 4, 8}) {
        const double e = efficiency_tops_per_watt(of(k), ib, wb);
        EXPECT_LE(e, prev);
        prev = e;
      }
    }
    for (int ib : {1, 2, 4, 8}) EXPECT_GE(efficiency_tops_per_watt(of(k), ib, 4), efficiency_tops_per_watt(of(k), ib, 8));
  }
  for (int ib : {1, 2, 4, 8}) {
    for (int wb : {4, 8}) {
      EXPECT_GT(efficiency_tops_per_watt(of(MacroKind::ChgFe), ib, wb),
                efficiency_tops_per_watt(of(MacroKind::CurFe), ib, wb));
    }
  }
}

TEST(PerfModel, MoreAdcBitsCostMore) {
  MacroConfig a = of(MacroKind::CurFe);
  MacroConfig b = a;
  b.adc_bits = 7;
  EXPECT_GT(energy_of_matvec(b, 8, 8), energy_of_matvec(a, 8, 8));
  EXPECT_GT(latency_of_matvec(b, 8), latency_of_matvec(a, 8));
}

TEST(PerfModel, Latency) {
  EXPECT_NEAR(cycle_time(of(MacroKind::CurFe)), 5.5e-9, 1e-21);
  EXPECT_NEAR(cycle_time(of(MacroKind::ChgFe)), 7.0e-9, 1e-21);
  EXPECT_NEAR(latency_of_matvec(of(MacroKind::CurFe), 8), 32 * 5.5e-9, 1e-18);
  EXPECT_NEAR(latency_of_matvec(of(MacroKind::ChgFe), 8), 32 * 7.0e-9, 1e-18);
}

TEST(PerfModel, DegenerateEnergyRejected) {
  MacroConfig c;
  c.energy = EnergyParams{};
  c.energy.mean_bl_swing = 0.0;
  EXPECT_THROW(efficiency_tops_per_watt(c, 8, 8), ConfigError);
  EXPECT_THROW(energy_of_matvec(MacroConfig{}, 0, 8), ConfigError);
  EXPECT_THROW(energy_of_matvec(MacroConfig{}, 8, 6), ConfigError);
}

TEST(PerfModel, NodeScaling) {
  EXPECT_DOUBLE_EQ(scale_energy_to_node(1.0, 28.0, 14.0), 0.25);
  EXPECT_THROW(scale_energy_to_node(1.0, 0.0, 14.0), ConfigError);
}

TEST(PerfModel, LayerBreakdown) {
  const MacroConfig c;
  const std::vector<LayerSchedule> s{{"fc1", 2, 4, 8}, {"fc2", 1, 4, 8}};
  const auto costs = layer_breakdown(s, c);
  ASSERT_EQ(costs.size(), 2u);
  EXPECT_NEAR(costs[0].energy.total(), 2 * energy_of_matvec(c, 4, 8), 1e-24);
  EXPECT_NEAR(costs[0].latency_seconds, 2 * latency_of_matvec(c, 4), 1e-18);
  std::ostringstream os;
  write_layer_breakdown_csv(os, costs);
  EXPECT_EQ(os.str().substr(0, 12), "layer,tiles,");
}

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fecim/device_models.hpp"
#include "fecim/errors.hpp"
#include "fecim/stats.hpp"

using namespace fecim;

namespace {

NFeFET1RModel ideal_curfe() {
  NFeFET1RModel m;
  m.channel_on_resistance = 0.0;
  return m;
}

}  // namespace

TEST(NFeFET1R, UnitCurrents) {
  EXPECT_NEAR(ideal_curfe().unit_current(), 100e-9, 1e-21);
  EXPECT_NEAR(NFeFET1RModel{}.unit_current(), 0.5 / 5.1e6, 1e-21);
  EXPECT_DOUBLE_EQ(NFeFET1RModel{}.ladder_resistance(0), 5e6);
  EXPECT_DOUBLE_EQ(NFeFET1RModel{}.ladder_resistance(3), 625e3);
}

TEST(NFeFET1R, BinaryWeightedOnCurrents) {
  const NFeFET1RModel m = ideal_curfe();
  for (int j = 0; j < 4; ++j) {
    EXPECT_NEAR(cell_current_curfe(m, j, false, true, true, 0.0), 100e-9 * (1 << j), 1e-20) << j;
  }
  EXPECT_NEAR(cell_current_curfe(m, 3, true, true, true, 0.0), -800e-9, 1e-20);
}

TEST(NFeFET1R, ChannelResistanceScalesEveryBitEqually) {
  const NFeFET1RModel m;
  const double unit = m.unit_current();
  for (int j = 0; j < 4; ++j) {
    EXPECT_NEAR(cell_current_curfe(m, j, false, true, true, 0.0), unit * (1 << j), 1e-20);
  }
}

TEST(NFeFET1R, LeakageWhenStoredOrInputIsZero) {
  const NFeFET1RModel m = ideal_curfe();
  EXPECT_NEAR(cell_current_curfe(m, 2, false, false, true, 0.0), 400e-9 / 1e5, 1e-25);
  EXPECT_NEAR(cell_current_curfe(m, 2, false, true, false, 0.0), 400e-9 / 1e5, 1e-25);
  EXPECT_NEAR(cell_current_curfe(m, 3, true, false, true, 0.0), -800e-9 / 1e5, 1e-25);
  NFeFET1RModel off = m;
  off.leakage = false;
  EXPECT_EQ(cell_current_curfe(off, 2, false, false, true, 0.0), 0.0);
}

TEST(NFeFET1R, PositiveVthShiftLowersCurrent) {
  const NFeFET1RModel m;
  const double nominal = cell_current_curfe(m, 1, false, true, true, 0.0);
  EXPECT_LT(cell_current_curfe(m, 1, false, true, true, 0.04), nominal);
  EXPECT_GT(cell_current_curfe(m, 1, false, true, true, -0.04), nominal);
  // r_ch (1 + 2 * 0.04)
  EXPECT_NEAR(cell_current_curfe(m, 0, false, true, true, 0.04), 0.5 / (5e6 + 1.08e5), 1e-20);
}

TEST(NFeFET1R, BadBitPositions) {
  const NFeFET1RModel m;
  EXPECT_THROW(cell_current_curfe(m, 4, false, true, true, 0.0), ConfigError);
  EXPECT_THROW(cell_current_curfe(m, -1, false, true, true, 0.0), ConfigError);
  EXPECT_THROW(cell_current_curfe(m, 2, true, true, true, 0.0), ConfigError);
}

TEST(MlcFeFET, SquareLawCurrentsDoublePerBit) {
  const MlcFeFETModel m;
  EXPECT_NEAR(m.unit_current(), 100e-9, 1e-20);
  for (int j = 0; j < 4; ++j) {
    const auto i = mlc_on_current(m, j, Polarity::NType, 0.0);
    EXPECT_FALSE(i.degenerate);
    EXPECT_NEAR(i.amps, 100e-9 * (1 << j), 1e-18) << j;
  }
}

TEST(MlcFeFET, DegenerateOverdriveClampsToZero) {
  const MlcFeFETModel m;
  const auto n = mlc_on_current(m, 0, Polarity::NType, 0.5);
  EXPECT_TRUE(n.degenerate);
  EXPECT_EQ(n.amps, 0.0);
  const auto p = mlc_on_current(m, 0, Polarity::PType, -0.5);
  EXPECT_TRUE(p.degenerate);
  EXPECT_FALSE(mlc_on_current(m, 0, Polarity::PType, 0.5).degenerate);
}

TEST(MlcFeFET, BitlineSteps) {
  const MlcFeFETModel m;
  for (int j = 0; j < 3; ++j) {
    EXPECT_NEAR(cell_delta_v_chgfe(m, j, false, true, true, 0.0, 0.5e-9, 50e-15).volts, -1e-3 * (1 << j), 1e-15);
  }
  EXPECT_NEAR(cell_delta_v_chgfe(m, 3, true, true, true, 0.0, 0.5e-9, 50e-15).volts, 8e-3, 1e-15);
  EXPECT_NEAR(cell_delta_v_chgfe(m, 3, false, true, true, 0.0, 0.5e-9, 50e-15).volts, -8e-3, 1e-15);
  EXPECT_NEAR(cell_delta_v_chgfe(m, 1, false, false, true, 0.0, 0.5e-9, 50e-15).volts, -2e-8, 1e-18);
  EXPECT_THROW(cell_delta_v_chgfe(m, 1, false, true, true, 0.0, 0.0, 50e-15), ConfigError);
  EXPECT_THROW(cell_delta_v_chgfe(m, 1, false, true, true, 0.0, 0.5e-9, 0.0), ConfigError);
  EXPECT_THROW(cell_delta_v_chgfe(m, 1, true, true, true, 0.0, 0.5e-9, 50e-15), ConfigError);
}

TEST(VthSampling, DeterministicPerKey) {
  const auto a = sample_vth(42, 3, 7, 0.04);
  EXPECT_EQ(a.deviation, sample_vth(42, 3, 7, 0.04).deviation);
  EXPECT_NE(a.deviation, sample_vth(42, 3, 8, 0.04).deviation);
  EXPECT_NE(a.deviation, sample_vth(43, 3, 7, 0.04).deviation);
  EXPECT_EQ(sample_vth(42, 3, 7, 0.0).deviation, 0.0);
  EXPECT_THROW(sample_vth(1, 0, 0, -0.01), ConfigError);
}

TEST(VthSampling, GaussianMoments) {
  std::vector<double> xs;
  for (std::uint32_t r = 0; r < 400; ++r) {
    for (std::uint32_t c = 0; c < 250; ++c) xs.push_back(sample_vth(9, r, c, 0.04).deviation);
  }
  EXPECT_NEAR(stats::mean(xs), 0.0, 0.0005);
  EXPECT_NEAR(stats::stddev(xs), 0.04, 0.0008);
  long beyond = 0;
  for (double x : xs) beyond += std::abs(x) > 0.08;
  EXPECT_NEAR(static_cast<double>(beyond) / xs.size(), 0.0455, 0.004);
}

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "fecim/encoding.hpp"
#include "fecim/errors.hpp"
#include "fecim/macro_engine.hpp"
#include "fecim/oracles.hpp"
#include "fecim/perf_model.hpp"
#include "support.hpp"

using namespace fecim;

class MacroKinds : public ::testing::TestWithParam<MacroKind> {};

TEST_P(MacroKinds, LosslessMatvecEqualsExactDot) {
  std::mt19937_64 gen(31);
  const MacroConfig cfg = test::lossless(GetParam());
  for (int c = 0; c < 20; ++c) {
    const IntMatrix w = test::random_weights(gen, 128, 16);
    const auto x = test::random_inputs(gen, 128, 8);
    const MacResult r = matvec(program_macro(w, cfg), x, 8);
    for (std::size_t b = 0; b < 16; ++b) ASSERT_EQ(r.outputs[b], exact_dot(x, w.column(b)));
    EXPECT_EQ(r.saturation_flags, 0);
    EXPECT_EQ(r.clipped_codes, 0);
  }
}

namespace {

double ideal_scaled(int value, const AdcConfig& a) {
  if (value < 0) return static_cast<double>(value) * -a.code_min() / -a.value_min();
  return static_cast<double>(value) * a.code_max() / a.value_max();
}

// Code the ADC must report for an exact nibble sum; at an exact tie either neighbour is allowed.
bool is_tie(int value, const AdcConfig& a) {
  const double s = ideal_scaled(value, a);
  return std::abs(s - std::floor(s) - 0.5) < 1e-9;
}

bool code_ok(int code, int value, const AdcConfig& a) {
  const double s = ideal_scaled(value, a);
  const double lo = std::floor(s);
  if (is_tie(value, a)) return code == static_cast<int>(lo) || code == static_cast<int>(lo) + 1;
  return code == static_cast<int>(std::lround(s));
}

}  // namespace

TEST_P(MacroKinds, LowResolutionCodesMatchIdealQuantizer) {
  std::mt19937_64 gen(32);
  MacroConfig cfg = test::lossless(GetParam());
  cfg.adc_bits = 6;
  const AnalogTransfer t = cfg.transfer();
  const AdcConfig high = make_reference(NibbleMode::TwosComplement, 6, 32, cfg.kind, t);
  const AdcConfig low = make_reference(NibbleMode::Unsigned, 6, 32, cfg.kind, t);
  int untied = 0;
  for (int c = 0; c < 10; ++c) {
    const IntMatrix w = test::random_weights(gen, 128, 16);
    const auto x = test::random_inputs(gen, 128, 8);
    const MacResult r = matvec(program_macro(w, cfg), x, 8, true);
    ASSERT_EQ(r.traces.size(), 16u * 8u * 4u);
    std::vector<std::int64_t> replay(16, 0);
    std::vector<bool> tied(16, false);
    for (const CycleTrace& tr : r.traces) {
      int hs = 0;
      int ls = 0;
      for (int row = tr.group * 32; row < tr.group * 32 + 32; ++row) {
        if (((x[row] >> tr.input_bit) & 1) == 0) continue;
        const auto p = encode_weight_8b(w.at(row, tr.bank));
        hs += p.high_value();
        ls += p.low_value();
      }
      if (is_tie(hs, high) || is_tie(ls, low)) tied[tr.bank] = true;
      ASSERT_TRUE(code_ok(tr.code_high, hs, high)) << tr.code_high << " for " << hs;
      ASSERT_TRUE(code_ok(tr.code_low, ls, low)) << tr.code_low << " for " << ls;
      const std::int64_t partial = 16 * dequantize({tr.code_high}, high) + dequantize({tr.code_low}, low);
      replay[tr.bank] += partial << tr.input_bit;
    }
    for (std::size_t b = 0; b < 16; ++b) {
      EXPECT_EQ(r.outputs[b], replay[b]);
      // away from ties the analog path is the quantized oracle
      if (!tied[b]) EXPECT_EQ(r.outputs[b], quantized_dot(x, w.column(b), 6, 32, 8));
      untied += !tied[b];
    }
  }
  EXPECT_GT(untied, 0);
}

TEST_P(MacroKinds, FourBitWeightsLossless) {
  std::mt19937_64 gen(33);
  MacroConfig cfg = test::lossless(GetParam());
  cfg.weight_bits = 4;
  const IntMatrix w = test::random_weights(gen, 128, 16, 4);
  const auto x = test::random_inputs(gen, 128, 4);
  const MacResult r = matvec(program_macro(w, cfg), x, 4);
  for (std::size_t b = 0; b < 16; ++b) EXPECT_EQ(r.outputs[b], exact_dot(x, w.column(b)));
}

TEST_P(MacroKinds, ReadBackRecoversWeights) {
  std::mt19937_64 gen(34);
  MacroConfig cfg;
  cfg.kind = GetParam();
  const IntMatrix w = test::random_weights(gen, 128, 16);
  EXPECT_EQ(program_macro(w, cfg).read_back(), w);
}

TEST_P(MacroKinds, DeterministicPerSeedAndTrial) {
  std::mt19937_64 gen(35);
  MacroConfig cfg;
  cfg.kind = GetParam();
  cfg.adc_bits = 9;
  const IntMatrix w = test::random_weights(gen, 128, 16);
  const auto x = test::random_inputs(gen, 128, 8);
  const auto a = matvec(program_macro(w, cfg, 3), x, 8, true);
  const auto b = matvec(program_macro(w, cfg, 3), x, 8, true);
  EXPECT_EQ(a.outputs, b.outputs);
  ASSERT_EQ(a.traces.size(), b.traces.size());
  for (std::size_t i = 0; i < a.traces.size(); ++i) EXPECT_EQ(a.traces[i].v_high, b.traces[i].v_high);
  const auto c = program_macro(w, cfg, 4);
  const auto d = program_macro(w, cfg, 3);
  EXPECT_NE(c.block(0, BlockKind::L4B, 0).rows[0][0].vth_deviation,
            d.block(0, BlockKind::L4B, 0).rows[0][0].vth_deviation);
}

TEST_P(MacroKinds, TracesAndCosts) {
  MacroConfig cfg;
  cfg.kind = GetParam();
  const IntMatrix w(128, 16);
  const std::vector<int> x(128, 3);
  const auto r = matvec(program_macro(w, cfg), x, 2, true);
  EXPECT_EQ(r.traces.size(), 16u * 2 * 4);
  EXPECT_DOUBLE_EQ(r.energy_joules, energy_of_matvec(cfg, 2, 8));
  EXPECT_DOUBLE_EQ(r.latency_seconds, latency_of_matvec(cfg, 2));
  for (int v : r.outputs) EXPECT_EQ(v, 0);
}

INSTANTIATE_TEST_SUITE_P(Both, MacroKinds, ::testing::Values(MacroKind::CurFe, MacroKind::ChgFe),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(MacroEngine, ShapeAndRangeErrors) {
  MacroConfig cfg;
  EXPECT_THROW(program_macro(IntMatrix(127, 16), cfg), MappingError);
  EXPECT_THROW(program_macro(IntMatrix(128, 15), cfg), MappingError);
  IntMatrix big(128, 16);
  big.at(0, 0) = 128;
  EXPECT_THROW(program_macro(big, cfg), EncodingError);
  const auto m = program_macro(IntMatrix(128, 16), cfg);
  EXPECT_THROW(matvec(m, std::vector<int>(127, 0), 8), MappingError);
  EXPECT_THROW(matvec(m, std::vector<int>(128, 0), 9), ConfigError);
  EXPECT_THROW(matvec(m, std::vector<int>(128, 16), 4), EncodingError);
}

TEST(MacroEngine, ArrayColumnLayout) {
  EXPECT_EQ(array_column(0, BlockKind::L4B, 0), 0u);
  EXPECT_EQ(array_column(0, BlockKind::H4B, 3), 7u);
  EXPECT_EQ(array_column(15, BlockKind::H4B, 3), 127u);
}

TEST(MacroEngine, VariationPerturbsButStaysClose) {
  std::mt19937_64 gen(36);
  MacroConfig cfg;
  cfg.kind = MacroKind::CurFe;
  cfg.adc_bits = 9;
  const IntMatrix w = test::random_weights(gen, 128, 16);
  const auto x = test::random_inputs(gen, 128, 8);
  const auto r = matvec(program_macro(w, cfg), x, 8);
  for (std::size_t b = 0; b < 16; ++b) EXPECT_NEAR(r.outputs[b], exact_dot(x, w.column(b)), 255.0 * 4 * 2 * 17);
}

TEST(MonteCarloTransfer, ShapeAndLinearityAtZeroSigma) {
  MacroConfig cfg = test::lossless(MacroKind::ChgFe);
  const TransferTable t = monte_carlo_transfer(cfg, BlockKind::H4B, 2);
  EXPECT_EQ(t.points.size(), 16u * 33);
  for (const auto& p : t.points) {
    EXPECT_EQ(p.target, p.active_rows * p.nibble);
    EXPECT_NEAR(p.mean_value, p.target, 1e-9);
    EXPECT_NEAR(p.std_v, 0.0, 1e-15);
  }
  std::ostringstream os;
  write_transfer_csv(os, t);
  EXPECT_EQ(os.str().substr(0, 9), "macro,blo");
}

TEST(MonteCarloTransfer, ChgfeSpreadsMoreThanCurfe) {
  MacroConfig cur;
  MacroConfig chg;
  chg.kind = MacroKind::ChgFe;
  const std::vector<int> nib{15};
  const auto a = monte_carlo_transfer(cur, BlockKind::L4B, 30, nib);
  const auto b = monte_carlo_transfer(chg, BlockKind::L4B, 30, nib);
  EXPECT_LT(a.points.back().std_value, b.points.back().std_value);
  EXPECT_THROW(monte_carlo_transfer(cur, BlockKind::L4B, 0), ConfigError);
}

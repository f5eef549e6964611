#include <gtest/gtest.h>

#include <random>
#include <stdexcept>
#include <vector>

#include "fecim/accumulation.hpp"
#include "fecim/encoding.hpp"
#include "fecim/oracles.hpp"
#include "support.hpp"

using namespace fecim;

TEST(Accumulation, CombineNibbles) {
  static_assert(combine_nibbles(-1, 15) == -1);
  static_assert(combine_nibbles(-8, 0) == -128);
  static_assert(combine_nibbles(7, 15) == 127);
  EXPECT_EQ(combine_nibbles(2, 3), 35);
}

TEST(Accumulation, InputBitWeighting) {
  AccumulatorState s;
  s = accumulate_input_bit(s, 3, 0);
  s = accumulate_input_bit(s, -2, 3);
  EXPECT_EQ(s.running_total, 3 - 16);
  EXPECT_EQ(s.input_bit_index, 4);
  EXPECT_THROW(accumulate_input_bit(s, 1, 8), std::out_of_range);
  EXPECT_THROW(accumulate_input_bit(s, 1, -1), std::out_of_range);
}

TEST(Accumulation, RowGroupsUnitWeightAndLimit) {
  AccumulatorState s;
  for (int g = 0; g < kMaxRowGroups; ++g) s = accumulate_row_group(s, 10 + g);
  EXPECT_EQ(s.running_total, 46);
  EXPECT_THROW(accumulate_row_group(s, 1), std::out_of_range);
}

TEST(Accumulation, OrderOfGroupsIrrelevant) {
  const std::vector<int> parts{5, -300, 1024, 7};
  AccumulatorState a, b;
  for (int p : parts) a = accumulate_row_group(a, p);
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) b = accumulate_row_group(b, *it);
  EXPECT_EQ(a.running_total, b.running_total);
}

TEST(Accumulation, BitSerialIdentityRandomCases) {
  std::mt19937_64 gen(21);
  long failures = 0;
  for (int c = 0; c < 10000; ++c) {
    const auto x = test::random_inputs(gen, 128, 8);
    const auto w = test::random_weights(gen, 128, 1).values;
    AccumulatorState s;
    for (int i = 0; i < 8; ++i) {
      std::int32_t plane = 0;
      for (std::size_t r = 0; r < x.size(); ++r) plane += encode_input(x[r], 8).bits[static_cast<std::size_t>(i)] * w[r];
      s = accumulate_input_bit(s, plane, i);
    }
    failures += s.running_total != exact_dot(x, w);
  }
  EXPECT_EQ(failures, 0);
}

TEST(Accumulation, ExtremeTotalsFitInt32) {
  AccumulatorState s;
  for (int i = 0; i < 8; ++i) {
    AccumulatorState g;
    for (int k = 0; k < 4; ++k) g = accumulate_row_group(g, -128 * 32);
    s = accumulate_input_bit(s, g.running_total, i);
  }
  EXPECT_EQ(s.running_total, -128 * 128 * 255);
}

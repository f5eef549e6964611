#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "fecim/errors.hpp"
#include "fecim/oracles.hpp"
#include "support.hpp"

using namespace fecim;

TEST(ExactDot, HandComputedValues) {
  const std::vector<int> x{1, 2, 3};
  const std::vector<int> w{-1, 0, 5};
  EXPECT_EQ(exact_dot(x, w), 14);
  EXPECT_EQ(exact_dot(std::vector<int>{}, std::vector<int>{}), 0);
}

TEST(ExactDot, ExtremeFullMacro) {
  const std::vector<int> x(128, 255);
  EXPECT_EQ(exact_dot(x, std::vector<int>(128, -128)), -128LL * 255 * 128);
  EXPECT_EQ(exact_dot(x, std::vector<int>(128, 127)), 127LL * 255 * 128);
}

TEST(ExactDot, LengthMismatchIsMappingError) {
  EXPECT_THROW(exact_dot(std::vector<int>{1, 2}, std::vector<int>{1}), MappingError);
}

TEST(ExactDot, MatchesBitExpansionOnMillionRandomCases) {
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<int> len(1, 16);
  std::uniform_int_distribution<int> bits(1, 8);
  std::vector<int> x, w;
  long failures = 0;
  for (int c = 0; c < 1'000'000; ++c) {
    const int m = bits(gen);
    const auto n = static_cast<std::size_t>(len(gen));
    x = test::random_inputs(gen, n, m);
    w = test::random_weights(gen, n, 1).values;
    failures += exact_dot(x, w) != test::bit_expansion_dot(x, w, m);
  }
  EXPECT_EQ(failures, 0);
}

TEST(QuantizedDot, LosslessAtNineBitsEqualsExact) {
  std::mt19937_64 gen(11);
  for (int c = 0; c < 300; ++c) {
    const auto x = test::random_inputs(gen, 128, 8);
    const auto w = test::random_weights(gen, 128, 1).values;
    const OracleResult r = oracle(x, w, 9, 32, 8);
    ASSERT_EQ(r.exact_mac, r.quantized_mac);
  }
}

TEST(QuantizedDot, LowResolutionIsBoundedAndDeterministic) {
  std::mt19937_64 gen(3);
  const auto x = test::random_inputs(gen, 128, 8);
  const auto w = test::random_weights(gen, 128, 1).values;
  const auto a = quantized_dot(x, w, 5, 32, 8);
  EXPECT_EQ(a, quantized_dot(x, w, 5, 32, 8));
  // per (bit, group) error <= 16 * 8 + 7.75; 4 groups; sum_i 2^i = 255
  EXPECT_LE(std::llabs(a - exact_dot(x, w)), static_cast<long long>(4 * 255 * (16 * 8 + 8)));
}

TEST(QuantizedDot, FourBitWeightsUseHighBlockOnly) {
  const std::vector<int> x(32, 1);
  const std::vector<int> w(32, -8);
  EXPECT_EQ(quantized_dot(x, w, 9, 32, 1, 4), -256);
  EXPECT_EQ(quantized_dot(x, w, 5, 32, 1, 4), -256);
}

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "fecim/macro_config.hpp"
#include "fecim/matrix_io.hpp"

namespace fecim::test {

// sum_i 2^i sum_r x_{r,i} * w_r, with w_r rebuilt from its raw two's-complement bits
inline std::int64_t bit_expansion_dot(std::span<const int> x, std::span<const int> w, int input_bits,
                                      int weight_bits = 8) {
  std::int64_t total = 0;
  for (int i = 0; i < input_bits; ++i) {
    std::int64_t plane = 0;
    for (std::size_t r = 0; r < x.size(); ++r) {
      if (((x[r] >> i) & 1) == 0) continue;
      const auto raw = static_cast<std::uint32_t>(w[r]) & ((1u << weight_bits) - 1);
      std::int64_t v = 0;
      for (int k = 0; k < weight_bits; ++k) {
        const std::int64_t bit = (raw >> k) & 1;
        v += k == weight_bits - 1 ? -bit * (std::int64_t{1} << k) : bit * (std::int64_t{1} << k);
      }
      plane += v;
    }
    total += plane * (std::int64_t{1} << i);
  }
  return total;
}

inline IntMatrix random_weights(std::mt19937_64& gen, std::size_t rows, std::size_t cols, int bits = 8) {
  std::uniform_int_distribution<int> d(-(1 << (bits - 1)), (1 << (bits - 1)) - 1);
  IntMatrix m(rows, cols, bits);
  for (int& v : m.values) v = d(gen);
  return m;
}

inline std::vector<int> random_inputs(std::mt19937_64& gen, std::size_t n, int bits) {
  std::uniform_int_distribution<int> d(0, (1 << bits) - 1);
  std::vector<int> x(n);
  for (int& v : x) v = d(gen);
  return x;
}

// 9-bit ADC, no variation, no leakage: the regime where the macro is exact.
inline MacroConfig lossless(MacroKind kind) {
  MacroConfig cfg;
  cfg.kind = kind;
  cfg.adc_bits = 9;
  cfg.set_vth_sigma(0.0);
  cfg.set_leakage(false);
  return cfg;
}

}  // namespace fecim::test

#pragma once

#include <cstdint>
#include <span>

namespace fecim {

struct OracleResult {
  std::int64_t exact_mac = 0;
  std::int64_t quantized_mac = 0;
};

/// Plain integer dot product sum x_r * w_r.
std::int64_t exact_dot(std::span<const int> x, std::span<const int> w);

/// Noise-free replay of the macro pipeline where the only error source is the
/// ADC: exact nibble sums per (input bit, 32-row group) are quantized with the
/// readout's value-axis quantizer, dequantized and accumulated.
std::int64_t quantized_dot(std::span<const int> x, std::span<const int> w, int adc_bits, int rows_per_group,
                           int input_bits, int weight_bits = 8);

OracleResult oracle(std::span<const int> x, std::span<const int> w, int adc_bits, int rows_per_group,
                    int input_bits, int weight_bits = 8);

}  // namespace fecim

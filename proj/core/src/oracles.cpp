#include "fecim/oracles.hpp"

#include <string>

#include "fecim/encoding.hpp"
#include "fecim/errors.hpp"
#include "fecim/readout.hpp"

namespace fecim {
namespace {

void check_lengths(std::span<const int> x, std::span<const int> w) {
  if (x.size() != w.size()) {
    throw MappingError("operand lengths differ: " + std::to_string(x.size()) + " vs " + std::to_string(w.size()));
  }
}

// value-axis ADC; the analog references only matter through the affine map
AdcConfig value_adc(NibbleMode mode, int bits, int rows) {
  AdcConfig cfg;
  cfg.mode = mode;
  cfg.bits = bits;
  cfg.rows_active = rows;
  cfg.v_ref_low = 0.0;
  cfg.v_ref_high = 1.0;
  cfg.validate();
  return cfg;
}

}  // namespace

std::int64_t exact_dot(std::span<const int> x, std::span<const int> w) {
  check_lengths(x, w);
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += static_cast<std::int64_t>(x[i]) * w[i];
  return acc;
}

std::int64_t quantized_dot(std::span<const int> x, std::span<const int> w, int adc_bits, int rows_per_group,
                           int input_bits, int weight_bits) {
  check_lengths(x, w);
  if (rows_per_group < 1) throw ConfigError("rows_per_group must be >= 1");
  if (weight_bits != 4 && weight_bits != 8) throw ConfigError("weight precision must be 4 or 8");
  const AdcConfig high_adc = value_adc(NibbleMode::TwosComplement, adc_bits, rows_per_group);
  const AdcConfig low_adc = value_adc(NibbleMode::Unsigned, adc_bits, rows_per_group);

  std::int64_t total = 0;
  for (int i = 0; i < input_bits; ++i) {
    for (std::size_t g = 0; g < x.size(); g += static_cast<std::size_t>(rows_per_group)) {
      const std::size_t end = std::min(x.size(), g + static_cast<std::size_t>(rows_per_group));
      int high = 0;
      int low = 0;
      for (std::size_t r = g; r < end; ++r) {
        if (x[r] < 0 || x[r] >= (1 << input_bits)) throw EncodingError("input outside precision");
        if (((x[r] >> i) & 1) == 0) continue;
        if (weight_bits == 8) {
          const WeightNibblePair p = encode_weight_8b(w[r]);
          high += p.high_value();
          low += p.low_value();
        } else {
          high += encode_weight_4b(w[r]).value;
        }
      }
      std::int64_t partial = dequantize(quantize_value(high, high_adc), high_adc);
      if (weight_bits == 8) partial = 16 * partial + dequantize(quantize_value(low, low_adc), low_adc);
      total += partial << i;
    }
  }
  return total;
}

OracleResult oracle(std::span<const int> x, std::span<const int> w, int adc_bits, int rows_per_group,
                    int input_bits, int weight_bits) {
  return {exact_dot(x, w), quantized_dot(x, w, adc_bits, rows_per_group, input_bits, weight_bits)};
}

}  // namespace fecim

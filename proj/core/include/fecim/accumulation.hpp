#pragma once

#include <cstdint>

namespace fecim {

/// Digital accumulator of one output column.
/// |total| <= 128 * 255 * 128 < 2^23, so 32 bits leave ample headroom.
struct AccumulatorState {
  std::int32_t running_total = 0;
  int input_bit_index = 0;
  int group_index = 0;
};

inline constexpr int kMaxRowGroups = 4;

/// 8-bit-weight partial from the 2CM (high) and N2CM (low) conversions.
constexpr std::int32_t combine_nibbles(std::int32_t high_value, std::int32_t low_value) {
  return 16 * high_value + low_value;
}

/// Adds partial * 2^bit_index.
AccumulatorState accumulate_input_bit(AccumulatorState state, std::int32_t partial, int bit_index);

/// Adds a 32-row group partial with unit weight.
AccumulatorState accumulate_row_group(AccumulatorState state, std::int32_t group_partial);

}  // namespace fecim

#include "fecim/accumulation.hpp"

#include <stdexcept>

namespace fecim {

AccumulatorState accumulate_input_bit(AccumulatorState state, std::int32_t partial, int bit_index) {
  if (bit_index < 0 || bit_index > 7) throw std::out_of_range("input bit index outside 0..7");
  state.running_total += partial * (std::int32_t{1} << bit_index);
  state.input_bit_index = bit_index + 1;
  return state;
}

AccumulatorState accumulate_row_group(AccumulatorState state, std::int32_t group_partial) {
  if (state.group_index >= kMaxRowGroups) throw std::out_of_range("more than 4 row groups accumulated");
  state.running_total += group_partial;
  ++state.group_index;
  return state;
}

}  // namespace fecim

#include "fecim/block.hpp"

#include "fecim/errors.hpp"

namespace fecim {

CellBlock make_block(BlockKind kind, std::span<const int> nibble_values, std::span<const double> deviations) {
  if (!deviations.empty() && deviations.size() != nibble_values.size() * kNibbleBits) {
    throw ConfigError("deviation count must be 4 per row");
  }
  CellBlock block{kind, std::vector<CellRow>(nibble_values.size())};
  for (std::size_t r = 0; r < nibble_values.size(); ++r) {
    const NibbleBits bits = NibbleValue{block_mode(kind), nibble_values[r]}.bits();
    for (int j = 0; j < kNibbleBits; ++j) {
      block.rows[r][j].stored = bits[j];
      if (!deviations.empty()) block.rows[r][j].vth_deviation = deviations[r * kNibbleBits + j];
    }
  }
  return block;
}

std::array<double, kNibbleBits> sum_drives(std::span<const DriveRow> drives, std::span<const std::uint8_t> inputs) {
  if (drives.size() != inputs.size()) throw ConfigError("input vector length must match block rows");
  std::array<double, kNibbleBits> sums{};
  for (std::size_t r = 0; r < drives.size(); ++r) {
    const DriveRow& row = drives[r];
    if (inputs[r]) {
      for (int j = 0; j < kNibbleBits; ++j) sums[j] += row[j].active;
    } else {
      for (int j = 0; j < kNibbleBits; ++j) sums[j] += row[j].idle;
    }
  }
  return sums;
}

}  // namespace fecim

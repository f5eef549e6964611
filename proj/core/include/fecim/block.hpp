#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "fecim/device_models.hpp"
#include "fecim/encoding.hpp"

namespace fecim {

/// H4B holds the signed high nibble (bit 3 is the sign cell), L4B the unsigned low nibble.
enum class BlockKind { H4B, L4B };

using CellRow = std::array<CellState, kNibbleBits>;

/// A 32-row x 4-bit block of programmed cells sharing one readout.
struct CellBlock {
  BlockKind kind = BlockKind::L4B;
  std::vector<CellRow> rows;
};

/// Analog contribution of one cell to its bitline for each input level:
/// `active` when the row's input bit is 1, `idle` when it is 0.
struct CellDrive {
  double active = 0.0;
  double idle = 0.0;
};
using DriveRow = std::array<CellDrive, kNibbleBits>;

constexpr NibbleMode block_mode(BlockKind kind) {
  return kind == BlockKind::H4B ? NibbleMode::TwosComplement : NibbleMode::Unsigned;
}

constexpr bool is_sign_cell(BlockKind kind, int bit) {
  return kind == BlockKind::H4B && bit == kNibbleBits - 1;
}

/// Block programmed with one nibble value per row and optional per-cell deviations
/// (row-major, 4 per row). Throws EncodingError on values outside the block's mode.
CellBlock make_block(BlockKind kind, std::span<const int> nibble_values,
                     std::span<const double> deviations = {});

/// Per-bitline sum of cell drives for one input vector.
std::array<double, kNibbleBits> sum_drives(std::span<const DriveRow> drives,
                                           std::span<const std::uint8_t> inputs);

}  // namespace fecim

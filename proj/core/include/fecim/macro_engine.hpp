#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "fecim/block.hpp"
#include "fecim/macro_config.hpp"
#include "fecim/matrix_io.hpp"
#include "fecim/readout.hpp"

namespace fecim {

/// A 128x128 macro programmed with a 128 x 16 weight matrix: output column c
/// lives in bank c, its high nibble in the bank's H4B blocks and its low nibble
/// in the L4B blocks, stacked as four 32-row groups.
class ProgrammedMacro {
 public:
  const MacroConfig& config() const { return config_; }
  const IntMatrix& weights() const { return weights_; }
  const CellBlock& block(int bank, BlockKind kind, int group) const { return blocks_[index(bank, kind, group)]; }
  std::span<const DriveRow> drives(int bank, BlockKind kind, int group) const {
    return drives_[index(bank, kind, group)];
  }
  int degenerate_cells() const { return degenerate_cells_; }

  /// Decodes the stored cell bits back into a weight matrix.
  IntMatrix read_back() const;

 private:
  friend ProgrammedMacro program_macro(const IntMatrix&, const MacroConfig&, std::uint64_t);

  std::size_t index(int bank, BlockKind kind, int group) const {
    return (static_cast<std::size_t>(bank) * 2 + (kind == BlockKind::H4B ? 0 : 1)) *
               static_cast<std::size_t>(config_.geometry.groups()) +
           static_cast<std::size_t>(group);
  }

  MacroConfig config_;
  IntMatrix weights_;
  std::vector<CellBlock> blocks_;
  std::vector<std::vector<DriveRow>> drives_;
  int degenerate_cells_ = 0;
};

/// Physical column of cell (bank, block, bit) in the 128-column array.
constexpr std::uint32_t array_column(int bank, BlockKind kind, int bit) {
  return static_cast<std::uint32_t>(bank * 2 * kNibbleBits + (kind == BlockKind::H4B ? kNibbleBits : 0) + bit);
}

/// Programs weights and samples one Vth deviation per cell. `trial` selects an
/// independent device instance derived from cfg.seed.
ProgrammedMacro program_macro(const IntMatrix& weights, const MacroConfig& cfg, std::uint64_t trial = 0);

struct CycleTrace {
  int bank = 0;
  int input_bit = 0;
  int group = 0;
  double v_high = 0.0;
  double v_low = 0.0;
  int code_high = 0;
  int code_low = 0;
};

struct MacResult {
  std::vector<std::int32_t> outputs;  // one per bank
  int saturation_flags = 0;           // TIA rail or BL dynamic-range events
  int clipped_codes = 0;
  int degenerate_cells = 0;
  double energy_joules = 0.0;
  double latency_seconds = 0.0;
  std::vector<CycleTrace> traces;
};

/// Bit-serial matrix-vector product over all banks.
MacResult matvec(const ProgrammedMacro& macro, std::span<const int> x, int input_bits, bool keep_traces = false);

struct TransferPoint {
  int active_rows = 0;
  int nibble = 0;
  int target = 0;
  double mean_v = 0.0;
  double std_v = 0.0;
  double mean_value = 0.0;  // mean_v mapped back through the nominal transfer
  double std_value = 0.0;
};

struct TransferTable {
  MacroKind kind = MacroKind::CurFe;
  BlockKind block = BlockKind::L4B;
  AnalogTransfer transfer;
  int trials = 0;
  std::vector<TransferPoint> points;
};

/// Analog transfer of a 32-row block over every (active rows, uniform nibble)
/// pair, with fresh Vth draws per trial. Empty sweep = every nibble of the block's mode.
TransferTable monte_carlo_transfer(const MacroConfig& cfg, BlockKind block, int trials,
                                   std::span<const int> nibble_sweep = {});

void write_transfer_csv(std::ostream& os, const TransferTable& table);

}  // namespace fecim

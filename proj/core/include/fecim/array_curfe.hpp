#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "fecim/block.hpp"
#include "fecim/device_models.hpp"

namespace fecim {

/// Ideal trans-impedance amplifier: virtual ground at Vcm, V = Vcm + I * Rout.
struct TiaConfig {
  double feedback_resistance = 25000.0 / 3.0;  // L4B full scale 480 x 100 nA -> 0.4 V
  double bias_voltage = 0.5;
};

struct CurfeOutput {
  double voltage = 0.0;
  double net_current = 0.0;
  bool saturated = false;  // output clamped to [0, Vdd_i]
};

/// One CurFe read cycle of a 32-row block: cell currents summed on the TIA node.
CurfeOutput evaluate_curfe_block(const CellBlock& block, std::span<const std::uint8_t> inputs,
                                 const NFeFET1RModel& device, const TiaConfig& tia);

/// Same cycle from precomputed cell currents.
CurfeOutput evaluate_curfe_drives(std::span<const DriveRow> drives, std::span<const std::uint8_t> inputs,
                                  const NFeFET1RModel& device, const TiaConfig& tia);

/// Cell currents of a block for both input levels.
std::vector<DriveRow> curfe_drives(const CellBlock& block, const NFeFET1RModel& device);

/// TIA transfer with rail clamp.
CurfeOutput tia_output(double net_current, const NFeFET1RModel& device, const TiaConfig& tia);

struct CurrentTraceEntry {
  int row = 0;
  int bit = 0;
  double current = 0.0;
};

std::vector<CurrentTraceEntry> trace_curfe_block(const CellBlock& block, std::span<const std::uint8_t> inputs,
                                                 const NFeFET1RModel& device);
void write_current_trace_csv(std::ostream& os, std::span<const CurrentTraceEntry> trace);

}  // namespace fecim

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <span>
#include <vector>

#include "fecim/block.hpp"
#include "fecim/device_models.hpp"

namespace fecim {

struct ChgfeParams {
  double bl_capacitance = 50e-15;
  double v_pre = 1.5;
  double t_pre = 1.0e-9;
  double t_eval = 0.5e-9;
  double bl_supply = 1.8;  // rail for the dynamic-range flag
};

/// Voltages on the four bitlines of a block, bit position order.
struct BlState {
  std::array<double, kNibbleBits> voltages{};
  bool out_of_range = false;
  int degenerate_cells = 0;
};

/// BL swing of a bit-0 cell over one evaluation window, I0 * t_eval / C.
double chgfe_unit_step(const MlcFeFETModel& device, const ChgfeParams& params);

BlState precharge(const ChgfeParams& params);

/// Constant-current evaluate phase; the sign BL rises, the others fall.
BlState evaluate_bls(const CellBlock& block, std::span<const std::uint8_t> inputs, const MlcFeFETModel& device,
                     const ChgfeParams& params, BlState state);

/// Evaluate phase from precomputed per-cell BL steps.
BlState evaluate_bl_drives(std::span<const DriveRow> drives, std::span<const std::uint8_t> inputs,
                           const ChgfeParams& params, BlState state);

/// Per-cell BL steps of a block for both input levels, plus the count of
/// degenerate (overdrive <= 0) programmed cells.
struct ChgfeDrives {
  std::vector<DriveRow> rows;
  int degenerate_cells = 0;
};
ChgfeDrives chgfe_drives(const CellBlock& block, const MlcFeFETModel& device, const ChgfeParams& params);

/// Equal-capacitor charge sharing: the mean of the four BL voltages.
double charge_share(const BlState& state);

struct BlTraceRow {
  std::string phase;
  std::array<double, kNibbleBits> voltages{};
};
void write_bl_trace_csv(std::ostream& os, std::span<const BlTraceRow> rows);

}  // namespace fecim

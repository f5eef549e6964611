#include "fecim/array_chgfe.hpp"

#include <algorithm>
#include <ostream>

#include <fmt/format.h>

#include "fecim/errors.hpp"

namespace fecim {
namespace {

void clamp_to_rails(BlState& state, const ChgfeParams& params) {
  for (double& v : state.voltages) {
    const double clamped = std::clamp(v, 0.0, params.bl_supply);
    if (clamped != v) state.out_of_range = true;
    v = clamped;
  }
}

}  // namespace

double chgfe_unit_step(const MlcFeFETModel& device, const ChgfeParams& params) {
  return device.unit_current() * params.t_eval / params.bl_capacitance;
}

BlState precharge(const ChgfeParams& params) {
  BlState s;
  s.voltages.fill(params.v_pre);
  return s;
}

ChgfeDrives chgfe_drives(const CellBlock& block, const MlcFeFETModel& device, const ChgfeParams& params) {
  ChgfeDrives out;
  out.rows.resize(block.rows.size());
  for (std::size_t r = 0; r < block.rows.size(); ++r) {
    for (int j = 0; j < kNibbleBits; ++j) {
      const CellState& c = block.rows[r][j];
      const bool sign = is_sign_cell(block.kind, j);
      const BitlineStep on = cell_delta_v_chgfe(device, j, sign, c.stored, true, c.vth_deviation, params.t_eval,
                                                params.bl_capacitance);
      const BitlineStep off = cell_delta_v_chgfe(device, j, sign, c.stored, false, c.vth_deviation, params.t_eval,
                                                 params.bl_capacitance);
      out.rows[r][j] = {on.volts, off.volts};
      if (on.degenerate) ++out.degenerate_cells;
    }
  }
  return out;
}

BlState evaluate_bl_drives(std::span<const DriveRow> drives, std::span<const std::uint8_t> inputs,
                           const ChgfeParams& params, BlState state) {
  const auto steps = sum_drives(drives, inputs);
  for (int j = 0; j < kNibbleBits; ++j) state.voltages[j] += steps[j];
  clamp_to_rails(state, params);
  return state;
}

BlState evaluate_bls(const CellBlock& block, std::span<const std::uint8_t> inputs, const MlcFeFETModel& device,
                     const ChgfeParams& params, BlState state) {
  if (inputs.size() != block.rows.size()) throw ConfigError("input vector length must match block rows");
  for (std::size_t r = 0; r < block.rows.size(); ++r) {
    for (int j = 0; j < kNibbleBits; ++j) {
      const CellState& c = block.rows[r][j];
      const BitlineStep dv = cell_delta_v_chgfe(device, j, is_sign_cell(block.kind, j), c.stored, inputs[r] != 0,
                                                c.vth_deviation, params.t_eval, params.bl_capacitance);
      state.voltages[j] += dv.volts;
      if (dv.degenerate) ++state.degenerate_cells;
    }
  }
  clamp_to_rails(state, params);
  return state;
}

double charge_share(const BlState& state) {
  return ((state.voltages[3] + state.voltages[2]) + (state.voltages[1] + state.voltages[0])) / kNibbleBits;
}

void write_bl_trace_csv(std::ostream& os, std::span<const BlTraceRow> rows) {
  os << "phase,bl0_v,bl1_v,bl2_v,bl3_v\n";
  for (const auto& r : rows) {
    os << fmt::format("{},{:.9f},{:.9f},{:.9f},{:.9f}\n", r.phase, r.voltages[0], r.voltages[1], r.voltages[2],
                      r.voltages[3]);
  }
}

}  // namespace fecim

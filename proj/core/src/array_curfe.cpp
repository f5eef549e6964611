#include "fecim/array_curfe.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "fecim/errors.hpp"

namespace fecim {

std::vector<DriveRow> curfe_drives(const CellBlock& block, const NFeFET1RModel& device) {
  std::vector<DriveRow> drives(block.rows.size());
  for (std::size_t r = 0; r < block.rows.size(); ++r) {
    for (int j = 0; j < kNibbleBits; ++j) {
      const CellState& c = block.rows[r][j];
      const bool sign = is_sign_cell(block.kind, j);
      drives[r][j].active = cell_current_curfe(device, j, sign, c.stored, true, c.vth_deviation);
      drives[r][j].idle = cell_current_curfe(device, j, sign, c.stored, false, c.vth_deviation);
    }
  }
  return drives;
}

CurfeOutput tia_output(double net_current, const NFeFET1RModel& device, const TiaConfig& tia) {
  CurfeOutput out;
  out.net_current = net_current;
  const double v = tia.bias_voltage + net_current * tia.feedback_resistance;
  out.voltage = std::clamp(v, 0.0, device.supply_voltage);
  out.saturated = out.voltage != v;
  return out;
}

CurfeOutput evaluate_curfe_drives(std::span<const DriveRow> drives, std::span<const std::uint8_t> inputs,
                                  const NFeFET1RModel& device, const TiaConfig& tia) {
  const auto per_bit = sum_drives(drives, inputs);
  // MSB first so the sign-cell term is added before the smaller magnitudes
  const double net = ((per_bit[3] + per_bit[2]) + per_bit[1]) + per_bit[0];
  return tia_output(net, device, tia);
}

CurfeOutput evaluate_curfe_block(const CellBlock& block, std::span<const std::uint8_t> inputs,
                                 const NFeFET1RModel& device, const TiaConfig& tia) {
  if (inputs.size() != block.rows.size()) throw ConfigError("input vector length must match block rows");
  double net = 0.0;
  for (std::size_t r = 0; r < block.rows.size(); ++r) {
    for (int j = 0; j < kNibbleBits; ++j) {
      const CellState& c = block.rows[r][j];
      net += cell_current_curfe(device, j, is_sign_cell(block.kind, j), c.stored, inputs[r] != 0, c.vth_deviation);
    }
  }
  return tia_output(net, device, tia);
}

std::vector<CurrentTraceEntry> trace_curfe_block(const CellBlock& block, std::span<const std::uint8_t> inputs,
                                                 const NFeFET1RModel& device) {
  if (inputs.size() != block.rows.size()) throw ConfigError("input vector length must match block rows");
  std::vector<CurrentTraceEntry> trace;
  trace.reserve(block.rows.size() * kNibbleBits);
  for (std::size_t r = 0; r < block.rows.size(); ++r) {
    for (int j = 0; j < kNibbleBits; ++j) {
      const CellState& c = block.rows[r][j];
      trace.push_back({static_cast<int>(r), j,
                       cell_current_curfe(device, j, is_sign_cell(block.kind, j), c.stored, inputs[r] != 0,
                                          c.vth_deviation)});
    }
  }
  return trace;
}

void write_current_trace_csv(std::ostream& os, std::span<const CurrentTraceEntry> trace) {
  os << "row,bit,current_a\n";
  for (const auto& e : trace) os << fmt::format("{},{},{:.9e}\n", e.row, e.bit, e.current);
}

}  // namespace fecim

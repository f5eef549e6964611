#include "fecim/macro_config.hpp"

#include <string>

#include "fecim/errors.hpp"

namespace fecim {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

const char* to_string(MacroKind kind) { return kind == MacroKind::CurFe ? "curfe" : "chgfe"; }

void MacroConfig::validate() const {
  const MacroGeometry& g = geometry;
  require(g.rows == 128, "geometry: rows must be 128 (got " + std::to_string(g.rows) + ")");
  require(g.cols == 128, "geometry: cols must be 128 (got " + std::to_string(g.cols) + ")");
  require(g.banks == 16, "geometry: banks must be 16 (got " + std::to_string(g.banks) + ")");
  require(g.rows_per_group == 32, "geometry: rows_per_group must be 32 (got " + std::to_string(g.rows_per_group) + ")");
  require(g.banks * 2 * kNibbleBits == g.cols, "geometry: banks x 8 columns must equal cols");
  require(adc_bits >= 1 && adc_bits <= 12, "adc bits must be in 1..12 (got " + std::to_string(adc_bits) + ")");
  require(weight_bits == 4 || weight_bits == 8, "weight_bits must be 4 or 8");

  const NFeFET1RModel& c = device.curfe;
  require(c.supply_voltage > c.bias_voltage && c.bias_voltage > 0.0, "device: need vdd_i > vcm > 0");
  require(c.ladder_base_resistance > 0.0, "device: ladder_base_resistance must be > 0");
  require(c.channel_on_resistance >= 0.0, "device: channel_on_resistance must be >= 0");
  require(c.vth_sigma >= 0.0 && device.chgfe.vth_sigma >= 0.0, "device: vth_sigma must be >= 0");
  require(c.on_off_ratio > 0.0 && device.chgfe.on_off_ratio > 0.0, "device: on_off_ratio must be > 0");
  require(device.chgfe.transconductance > 0.0, "device: transconductance must be > 0");
  require(device.chgfe.base_overdrive > 0.0, "device: base_overdrive must be > 0");
  require(device.tia.feedback_resistance > 0.0, "tia: feedback_resistance must be > 0");

  const ChgfeParams& a = device.chgfe_array;
  require(a.bl_capacitance > 0.0, "chgfe: bl_capacitance must be > 0");
  require(a.t_eval > 0.0 && a.t_pre > 0.0, "chgfe: t_pre and t_eval must be > 0");
  require(a.bl_supply >= a.v_pre && a.v_pre > 0.0, "chgfe: need bl_supply >= v_pre > 0");

  require(energy.e_tia_per_eval >= 0.0 && energy.e_adc_per_bit >= 0.0 && energy.e_digital_per_accum >= 0.0 &&
              energy.e_driver_per_row >= 0.0 && energy.mean_bl_swing >= 0.0 && energy.calibration_scale >= 0.0,
          "energy: all parameters must be >= 0");
  require(latency.t_eval > 0.0 && latency.t_share >= 0.0 && latency.t_sar_bit > 0.0 && latency.t_digital >= 0.0,
          "latency: timings must be positive");
}

double MacroConfig::vth_sigma() const {
  return kind == MacroKind::CurFe ? device.curfe.vth_sigma : device.chgfe.vth_sigma;
}

void MacroConfig::set_vth_sigma(double sigma) {
  device.curfe.vth_sigma = sigma;
  device.chgfe.vth_sigma = sigma;
}

void MacroConfig::set_leakage(bool on) {
  device.curfe.leakage = on;
  device.chgfe.leakage = on;
}

AnalogTransfer MacroConfig::transfer() const {
  return kind == MacroKind::CurFe ? curfe_transfer(device.curfe, device.tia)
                                  : chgfe_transfer(device.chgfe, device.chgfe_array);
}

}  // namespace fecim

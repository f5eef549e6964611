#include "fecim/readout.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fecim/errors.hpp"

namespace fecim {

AnalogTransfer curfe_transfer(const NFeFET1RModel& device, const TiaConfig& tia) {
  return {tia.bias_voltage, device.unit_current() * tia.feedback_resistance};
}

AnalogTransfer chgfe_transfer(const MlcFeFETModel& device, const ChgfeParams& params) {
  return {params.v_pre, -chgfe_unit_step(device, params) / kNibbleBits};
}

int AdcConfig::value_min() const { return nibble_min(mode) * rows_active; }
int AdcConfig::value_max() const { return nibble_max(mode) * rows_active; }

int AdcConfig::code_min() const { return mode == NibbleMode::TwosComplement ? -(1 << (bits - 1)) : 0; }

int AdcConfig::code_max() const {
  return mode == NibbleMode::TwosComplement ? (1 << (bits - 1)) - 1 : (1 << bits) - 1;
}

void AdcConfig::validate() const {
  if (bits < 1 || bits > 12) throw ConfigError("adc bits " + std::to_string(bits) + " outside 1..12");
  if (rows_active < 1) throw ConfigError("adc rows_active must be >= 1");
  if (!(v_ref_high > v_ref_low)) throw ConfigError("adc reference span is empty");
}

AdcConfig make_reference(NibbleMode mode, int bits, int rows_active, MacroKind kind, const AnalogTransfer& transfer) {
  AdcConfig cfg;
  cfg.mode = mode;
  cfg.bits = bits;
  cfg.rows_active = rows_active;
  if (bits < 1 || bits > 12) throw ConfigError("adc bits " + std::to_string(bits) + " outside 1..12");
  if (rows_active < 1) throw ConfigError("adc rows_active must be >= 1");
  const double v_at_min = transfer.voltage(cfg.value_min());
  const double v_at_max = transfer.voltage(cfg.value_max());
  cfg.v_ref_low = std::min(v_at_min, v_at_max);
  cfg.v_ref_high = std::max(v_at_min, v_at_max);
  cfg.polarity = kind == MacroKind::ChgFe ? AdcPolarity::Inverted : AdcPolarity::Direct;
  if ((cfg.polarity == AdcPolarity::Inverted) != (transfer.volts_per_value < 0.0)) {
    throw ConfigError("macro transfer slope disagrees with the ADC polarity");
  }
  cfg.validate();
  return cfg;
}

double value_from_voltage(double v, const AdcConfig& cfg) {
  const double frac = cfg.polarity == AdcPolarity::Direct ? (v - cfg.v_ref_low) / (cfg.v_ref_high - cfg.v_ref_low)
                                                          : (cfg.v_ref_high - v) / (cfg.v_ref_high - cfg.v_ref_low);
  return cfg.value_min() + frac * cfg.value_span();
}

AdcCode quantize_value(double value, const AdcConfig& cfg) {
  if (!std::isfinite(value)) throw ConversionError("non-finite ADC input");
  const double tol = 1e-9 * cfg.value_span();
  AdcCode out;
  out.clipped = value < cfg.value_min() - tol || value > cfg.value_max() + tol;
  double scaled = 0.0;
  if (value < 0.0) {
    if (cfg.code_min() < 0) scaled = value * -cfg.code_min() / -cfg.value_min();
  } else if (cfg.code_max() > 0) {
    scaled = value * cfg.code_max() / cfg.value_max();
  }
  scaled = std::clamp(scaled, static_cast<double>(cfg.code_min()) - 1.0, static_cast<double>(cfg.code_max()) + 1.0);
  out.code = std::clamp(static_cast<int>(std::lround(scaled)), cfg.code_min(), cfg.code_max());
  return out;
}

AdcCode convert(double v, const AdcConfig& cfg) {
  if (!std::isfinite(v)) throw ConversionError("non-finite ADC input voltage");
  return quantize_value(value_from_voltage(v, cfg), cfg);
}

int dequantize(AdcCode code, const AdcConfig& cfg) {
  if (code.code < cfg.code_min() || code.code > cfg.code_max()) {
    throw ConversionError("ADC code " + std::to_string(code.code) + " outside mode range");
  }
  if (code.code < 0) {
    return static_cast<int>(std::lround(static_cast<double>(code.code) * -cfg.value_min() / -cfg.code_min()));
  }
  if (code.code == 0) return 0;
  return static_cast<int>(std::lround(static_cast<double>(code.code) * cfg.value_max() / cfg.code_max()));
}

}  // namespace fecim

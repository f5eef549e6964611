#pragma once

#include "fecim/array_chgfe.hpp"
#include "fecim/array_curfe.hpp"
#include "fecim/device_models.hpp"
#include "fecim/encoding.hpp"

namespace fecim {

enum class MacroKind { CurFe, ChgFe };

enum class AdcPolarity { Direct, Inverted };

/// Affine map from integer block value (nibble dot product) to output voltage.
struct AnalogTransfer {
  double v_zero = 0.0;
  double volts_per_value = 0.0;

  double voltage(double value) const { return v_zero + volts_per_value * value; }
};

/// Vcm + value * I_unit * Rout.
AnalogTransfer curfe_transfer(const NFeFET1RModel& device, const TiaConfig& tia);
/// v_pre - value * dV_unit / 4 (charge sharing over four BLs).
AnalogTransfer chgfe_transfer(const MlcFeFETModel& device, const ChgfeParams& params);

/// SAR ADC with reference voltages from the reference bank. The references
/// cover the full legal value span of `rows_active` rows: [0, 15 r] for N2CM,
/// [-8 r, 7 r] for 2CM.
struct AdcConfig {
  NibbleMode mode = NibbleMode::Unsigned;
  int bits = 5;
  double v_ref_low = 0.0;
  double v_ref_high = 0.0;
  AdcPolarity polarity = AdcPolarity::Direct;
  int rows_active = 32;

  int value_min() const;
  int value_max() const;
  int value_span() const { return value_max() - value_min(); }
  int code_min() const;
  int code_max() const;
  void validate() const;
};

struct AdcCode {
  int code = 0;
  bool clipped = false;
};

AdcConfig make_reference(NibbleMode mode, int bits, int rows_active, MacroKind kind, const AnalogTransfer& transfer);

/// Inverse of the reference-bank affine map (polarity corrected).
double value_from_voltage(double v, const AdcConfig& cfg);

/// Mid-tread quantizer on the value axis. 2CM uses separate negative and
/// positive step sizes so both span endpoints land exactly on the extreme codes.
AdcCode quantize_value(double value, const AdcConfig& cfg);

AdcCode convert(double v, const AdcConfig& cfg);

/// Integer value estimate of a code.
int dequantize(AdcCode code, const AdcConfig& cfg);

}  // namespace fecim

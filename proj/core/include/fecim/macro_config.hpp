#pragma once

#include <cstdint>

#include "fecim/array_chgfe.hpp"
#include "fecim/array_curfe.hpp"
#include "fecim/device_models.hpp"
#include "fecim/readout.hpp"

namespace fecim {

/// Per-event energy constants of the bookkeeping model (joules).
struct EnergyParams {
  double e_tia_per_eval = 0.0;       // CurFe, one TIA conversion of one block
  double mean_bl_swing = 0.030;      // ChgFe, V_pre - V_residual used for BL recharge
  double e_adc_per_bit = 0.0;        // one SAR bit decision
  double e_digital_per_accum = 0.0;  // one accumulator update (per bank per cycle)
  double e_driver_per_row = 0.0;     // one wordline activation
  double calibration_scale = 1.0;
};

struct LatencyParams {
  double t_eval = 0.5e-9;     // CurFe evaluate / TIA settle
  double t_share = 0.5e-9;    // ChgFe charge sharing
  double t_sar_bit = 1.0e-9;  // per ADC bit
  double t_digital = 0.5e-9;  // accumulation, pipelined against the next cycle
};

/// Efficiency anchors and fixed shares used to solve for the free energy constants.
struct CalibrationTargets {
  double curfe_tops_per_watt = 12.18;
  double chgfe_tops_per_watt = 14.47;
  int input_bits = 8;
  int weight_bits = 8;
  int adc_bits = 5;
  double digital_fraction = 0.05;
  double driver_fraction = 0.05;
  double mean_bl_swing = 0.030;
};

EnergyParams calibrate_energy(const CalibrationTargets& targets, const ChgfeParams& chgfe);

struct DeviceProfile {
  NFeFET1RModel curfe;
  TiaConfig tia;
  MlcFeFETModel chgfe;
  ChgfeParams chgfe_array;
};

struct MacroGeometry {
  int rows = 128;
  int cols = 128;
  int banks = 16;
  int rows_per_group = 32;

  int groups() const { return rows / rows_per_group; }
};

struct MacroConfig {
  MacroKind kind = MacroKind::CurFe;
  int adc_bits = 5;
  int weight_bits = 8;
  std::uint64_t seed = 1;
  MacroGeometry geometry;
  DeviceProfile device;
  EnergyParams energy = calibrate_energy(CalibrationTargets{}, ChgfeParams{});
  LatencyParams latency;

  /// Throws ConfigError on any geometry or range violation.
  void validate() const;
  double vth_sigma() const;
  /// Sets the Vth sigma of both device models.
  void set_vth_sigma(double sigma);
  /// Enables or disables OFF-cell leakage on both device models.
  void set_leakage(bool on);
  AnalogTransfer transfer() const;
};

const char* to_string(MacroKind kind);

}  // namespace fecim

#pragma once

#include <cstdint>

namespace fecim {

/// Bit position inside a 4-cell nibble (0 = LSB, 3 = MSB / sign cell in H4B).
inline constexpr int kNibbleBits = 4;

enum class Polarity { NType, PType };

/// 1nFeFET1R cell of the current-mode macro: FeFET channel in series with a
/// binary-weighted drain resistor.
struct NFeFET1RModel {
  double supply_voltage = 1.0;             // Vdd_i on SL[7]
  double bias_voltage = 0.5;               // Vcm at the TIA input
  double ladder_base_resistance = 5.0e6;   // bit 0 leg; bit j uses R/2^j
  double channel_on_resistance = 1.0e5;    // bit-0 channel; scales with its leg
  double channel_resistance_sensitivity = 2.0;  // per volt of Vth shift
  double vth_sigma = 0.040;
  double on_off_ratio = 1.0e5;
  bool leakage = true;

  double ladder_resistance(int bit) const;
  /// Nominal bit-0 ON current, Vcm / (R_base + r_ch).
  double unit_current() const;
};

/// Saturation-region MLC FeFET of the charge-mode macro.
struct MlcFeFETModel {
  double transconductance = 6.25e-7;  // K, A/V^2; 100 nA at 0.4 V overdrive
  double base_overdrive = 0.4;        // bit-0 overdrive; bit j uses 0.4 * 2^(j/2)
  double vth_sigma = 0.040;
  double on_off_ratio = 1.0e5;
  bool leakage = true;

  double overdrive(int bit) const;
  /// Nominal bit-0 saturation current K * Vov0^2.
  double unit_current() const;
};

/// Vth deviation drawn for one cell.
struct VthSample {
  double deviation = 0.0;
  std::uint64_t seed = 0;
  std::uint32_t row = 0;
  std::uint32_t col = 0;
};

/// One programmed cell.
struct CellState {
  std::uint8_t stored = 0;
  double vth_deviation = 0.0;
};

/// Deterministic Gaussian keyed by (seed, row, col). sigma = 0 gives 0.
VthSample sample_vth(std::uint64_t seed, std::uint32_t row, std::uint32_t col, double sigma);

/// Signed cell current into the TIA node. Positive for magnitude cells, negative
/// for the sign cell (its SL sits at Vdd_i above the Vcm-biased BL).
double cell_current_curfe(const NFeFET1RModel& model, int bit_position, bool is_sign_position,
                          bool stored_bit, bool input_bit, double vth_deviation);

struct SaturationCurrent {
  double amps = 0.0;
  bool degenerate = false;  // overdrive + deviation <= 0, clamped to zero
};

/// Magnitude of the saturation current of a programmed '1' cell.
SaturationCurrent mlc_on_current(const MlcFeFETModel& model, int bit_position, Polarity polarity,
                                 double vth_deviation);

struct BitlineStep {
  double volts = 0.0;
  bool degenerate = false;
};

/// BL voltage change caused by one ChgFe cell over the evaluation window.
/// Magnitude bits discharge their BL (negative), the p-type sign cell charges it.
BitlineStep cell_delta_v_chgfe(const MlcFeFETModel& model, int bit_position, bool is_sign_position,
                               bool stored_bit, bool input_bit, double vth_deviation,
                               double eval_time, double bl_capacitance);

}  // namespace fecim

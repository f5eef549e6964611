#include "fecim/device_models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fecim/errors.hpp"
#include "fecim/rng.hpp"

namespace fecim {
namespace {

void check_bit(int bit, bool is_sign) {
  if (bit < 0 || bit >= kNibbleBits) {
    throw ConfigError("bit position " + std::to_string(bit) + " outside 0..3");
  }
  if (is_sign && bit != kNibbleBits - 1) {
    throw ConfigError("sign cell must sit at bit position 3");
  }
}

}  // namespace

double NFeFET1RModel::ladder_resistance(int bit) const {
  check_bit(bit, false);
  return ladder_base_resistance / static_cast<double>(1 << bit);
}

double NFeFET1RModel::unit_current() const {
  return bias_voltage / (ladder_base_resistance + channel_on_resistance);
}

double MlcFeFETModel::overdrive(int bit) const {
  check_bit(bit, false);
  return base_overdrive * std::pow(2.0, 0.5 * bit);
}

double MlcFeFETModel::unit_current() const {
  return transconductance * base_overdrive * base_overdrive;
}

VthSample sample_vth(std::uint64_t seed, std::uint32_t row, std::uint32_t col, double sigma) {
  if (!(sigma >= 0.0)) throw ConfigError("vth sigma must be >= 0");
  VthSample s{0.0, seed, row, col};
  if (sigma > 0.0) s.deviation = sigma * rng::standard_normal(seed, row, col);
  return s;
}

double cell_current_curfe(const NFeFET1RModel& model, int bit_position, bool is_sign_position,
                          bool stored_bit, bool input_bit, double vth_deviation) {
  check_bit(bit_position, is_sign_position);
  const double drive = is_sign_position ? model.supply_voltage - model.bias_voltage : model.bias_voltage;
  const double sign = is_sign_position ? -1.0 : 1.0;
  // bit j behaves as 2^j unit legs in parallel: ladder R_base/2^j and channel r_ch/2^j
  const double weight = static_cast<double>(1 << bit_position);
  if (!(stored_bit && input_bit)) {
    if (!model.leakage) return 0.0;
    const double nominal = weight * drive / (model.ladder_base_resistance + model.channel_on_resistance);
    return sign * nominal / model.on_off_ratio;
  }
  const double r_channel = std::max(
      0.0, model.channel_on_resistance * (1.0 + model.channel_resistance_sensitivity * vth_deviation));
  return sign * weight * drive / (model.ladder_base_resistance + r_channel);
}

SaturationCurrent mlc_on_current(const MlcFeFETModel& model, int bit_position, Polarity polarity,
                                 double vth_deviation) {
  const double nominal = model.overdrive(bit_position);
  // higher |Vth| shrinks the overdrive; a p-type Vth shift has the opposite sign
  const double vov = polarity == Polarity::NType ? nominal - vth_deviation : nominal + vth_deviation;
  if (vov <= 0.0) return {0.0, true};
  return {model.transconductance * vov * vov, false};
}

BitlineStep cell_delta_v_chgfe(const MlcFeFETModel& model, int bit_position, bool is_sign_position,
                               bool stored_bit, bool input_bit, double vth_deviation,
                               double eval_time, double bl_capacitance) {
  check_bit(bit_position, is_sign_position);
  if (!(eval_time > 0.0)) throw ConfigError("eval_time must be > 0");
  if (!(bl_capacitance > 0.0)) throw ConfigError("bl_capacitance must be > 0");
  const double direction = is_sign_position ? 1.0 : -1.0;
  const double scale = eval_time / bl_capacitance;
  if (!(stored_bit && input_bit)) {
    if (!model.leakage) return {};
    const double vov = model.overdrive(bit_position);
    return {direction * model.transconductance * vov * vov / model.on_off_ratio * scale, false};
  }
  const auto polarity = is_sign_position ? Polarity::PType : Polarity::NType;
  const SaturationCurrent i = mlc_on_current(model, bit_position, polarity, vth_deviation);
  return {direction * i.amps * scale, i.degenerate};
}

}  // namespace fecim

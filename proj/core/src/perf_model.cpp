#include "fecim/perf_model.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "fecim/errors.hpp"

namespace fecim {
namespace {

int blocks_per_cycle(int weight_bits) {
  if (weight_bits != 4 && weight_bits != 8) throw ConfigError("weight precision must be 4 or 8");
  return weight_bits == 8 ? 2 : 1;
}

double precharge_energy_per_bl(const ChgfeParams& p, double swing) { return p.bl_capacitance * swing * p.v_pre; }

// bank-cycles and wordline activations of one 128x128 matvec
struct CycleCounts {
  double cycles;
  double bank_cycles;
  double row_activations;
};

CycleCounts counts(const MacroGeometry& g, int input_bits) {
  if (input_bits < 1 || input_bits > 8) throw ConfigError("input precision must be 1..8");
  const double cycles = static_cast<double>(input_bits) * g.groups();
  return {cycles, cycles * g.banks, cycles * g.rows_per_group};
}

}  // namespace

EnergyBreakdown& EnergyBreakdown::operator+=(const EnergyBreakdown& o) {
  array += o.array;
  driver += o.driver;
  adc += o.adc;
  digital += o.digital;
  return *this;
}

EnergyBreakdown operator*(const EnergyBreakdown& e, double k) {
  return {e.array * k, e.driver * k, e.adc * k, e.digital * k};
}

EnergyParams calibrate_energy(const CalibrationTargets& t, const ChgfeParams& chgfe) {
  const MacroGeometry g;
  const CycleCounts n = counts(g, t.input_bits);
  const double blocks = blocks_per_cycle(t.weight_bits);
  const double ops = 2.0 * g.rows * g.banks;
  const double e_chg = ops / (t.chgfe_tops_per_watt * 1e12);
  const double e_cur = ops / (t.curfe_tops_per_watt * 1e12);

  EnergyParams p;
  p.mean_bl_swing = t.mean_bl_swing;
  p.e_digital_per_accum = t.digital_fraction * e_chg / n.bank_cycles;
  p.e_driver_per_row = t.driver_fraction * e_chg / n.row_activations;
  const double fixed = (t.digital_fraction + t.driver_fraction) * e_chg;
  const double precharge =
      n.bank_cycles * blocks * kNibbleBits * precharge_energy_per_bl(chgfe, t.mean_bl_swing);
  const double adc = e_chg - fixed - precharge;
  p.e_adc_per_bit = adc / (n.bank_cycles * blocks * t.adc_bits);
  p.e_tia_per_eval = (e_cur - fixed - adc) / (n.bank_cycles * blocks);
  if (!(p.e_adc_per_bit > 0.0) || !(p.e_tia_per_eval > 0.0)) {
    throw ConfigError("energy calibration has no positive solution for these anchors");
  }
  return p;
}

double ops_per_matvec(const MacroConfig& cfg) { return 2.0 * cfg.geometry.rows * cfg.geometry.banks; }

EnergyBreakdown energy_breakdown(const MacroConfig& cfg, int input_bits, int weight_bits) {
  const CycleCounts n = counts(cfg.geometry, input_bits);
  const double blocks = blocks_per_cycle(weight_bits);
  const EnergyParams& e = cfg.energy;
  const double per_block =
      cfg.kind == MacroKind::CurFe
          ? e.e_tia_per_eval
          : kNibbleBits * precharge_energy_per_bl(cfg.device.chgfe_array, e.mean_bl_swing);
  EnergyBreakdown out;
  out.array = n.bank_cycles * blocks * per_block;
  out.adc = n.bank_cycles * blocks * cfg.adc_bits * e.e_adc_per_bit;
  out.digital = n.bank_cycles * e.e_digital_per_accum;
  out.driver = n.row_activations * e.e_driver_per_row;
  return out * e.calibration_scale;
}

double energy_of_matvec(const MacroConfig& cfg, int input_bits, int weight_bits) {
  return energy_breakdown(cfg, input_bits, weight_bits).total();
}

double efficiency_tops_per_watt(const MacroConfig& cfg, int input_bits, int weight_bits) {
  const double e = energy_of_matvec(cfg, input_bits, weight_bits);
  if (!(e > 0.0) || !std::isfinite(e)) throw ConfigError("energy model is degenerate (non-positive matvec energy)");
  return ops_per_matvec(cfg) / e / 1e12;
}

double cycle_time(const MacroConfig& cfg) {
  const LatencyParams& l = cfg.latency;
  const double adc = cfg.adc_bits * l.t_sar_bit;
  const double analog = cfg.kind == MacroKind::CurFe
                            ? l.t_eval
                            : cfg.device.chgfe_array.t_pre + cfg.device.chgfe_array.t_eval + l.t_share;
  return std::max(analog + adc, l.t_digital);
}

double latency_of_matvec(const MacroConfig& cfg, int input_bits) {
  return counts(cfg.geometry, input_bits).cycles * cycle_time(cfg);
}

double scale_energy_to_node(double joules, double from_nm, double to_nm) {
  if (!(from_nm > 0.0) || !(to_nm > 0.0)) throw ConfigError("technology node must be positive");
  return joules * (to_nm / from_nm) * (to_nm / from_nm);
}

std::vector<LayerCost> layer_breakdown(std::span<const LayerSchedule> schedule, const MacroConfig& cfg) {
  std::vector<LayerCost> out;
  out.reserve(schedule.size());
  for (const auto& layer : schedule) {
    LayerCost c;
    c.name = layer.name;
    c.tiles = layer.tiles;
    c.energy = energy_breakdown(cfg, layer.input_bits, layer.weight_bits) * static_cast<double>(layer.tiles);
    c.latency_seconds = latency_of_matvec(cfg, layer.input_bits) * static_cast<double>(layer.tiles);
    out.push_back(c);
  }
  return out;
}

void write_layer_breakdown_csv(std::ostream& os, std::span<const LayerCost> costs) {
  os << "layer,tiles,energy_array_j,energy_driver_j,energy_adc_j,energy_digital_j,energy_total_j,latency_s\n";
  for (const auto& c : costs) {
    os << fmt::format("{},{},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e},{:.6e}\n", c.name, c.tiles, c.energy.array,
                      c.energy.driver, c.energy.adc, c.energy.digital, c.energy.total(), c.latency_seconds);
  }
}

}  // namespace fecim

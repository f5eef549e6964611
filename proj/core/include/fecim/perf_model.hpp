#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fecim/macro_config.hpp"

namespace fecim {

struct EnergyBreakdown {
  double array = 0.0;  // TIA (CurFe) or BL precharge (ChgFe)
  double driver = 0.0;
  double adc = 0.0;
  double digital = 0.0;

  double total() const { return array + driver + adc + digital; }
  EnergyBreakdown& operator+=(const EnergyBreakdown& o);
};

EnergyBreakdown operator*(const EnergyBreakdown& e, double k);

/// Operations of one full macro matrix-vector product (1 MAC = 2 ops).
double ops_per_matvec(const MacroConfig& cfg);

/// Component energies of one matvec: (input bits x row groups) cycles, all banks in parallel.
EnergyBreakdown energy_breakdown(const MacroConfig& cfg, int input_bits, int weight_bits);
double energy_of_matvec(const MacroConfig& cfg, int input_bits, int weight_bits);

/// TOPS/W; throws ConfigError when the energy model is degenerate (<= 0).
double efficiency_tops_per_watt(const MacroConfig& cfg, int input_bits, int weight_bits);

double cycle_time(const MacroConfig& cfg);
double latency_of_matvec(const MacroConfig& cfg, int input_bits);

/// Energy scaled between technology nodes assuming energy ~ node^2.
double scale_energy_to_node(double joules, double from_nm, double to_nm);

struct LayerSchedule {
  std::string name;
  long tiles = 0;  // macro matvec invocations
  int input_bits = 8;
  int weight_bits = 8;
};

struct LayerCost {
  std::string name;
  long tiles = 0;
  EnergyBreakdown energy;
  double latency_seconds = 0.0;
};

std::vector<LayerCost> layer_breakdown(std::span<const LayerSchedule> schedule, const MacroConfig& cfg);
void write_layer_breakdown_csv(std::ostream& os, std::span<const LayerCost> costs);

}  // namespace fecim

#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "fecim/macro_config.hpp"

namespace fecim {

struct ExperimentParams {
  int trials = 60;          // Monte Carlo trials per transfer point
  long draws = 10000;       // per-bit draws for the variation histograms
  int matvecs = 200;        // random full matvecs in oracle_equiv
  long configs = 10000;     // randomized 1b x 4b fills in oracle_equiv
  int input_bits = 8;
};

struct NnParams {
  std::string model;    // empty: shipped digits model for the weight precision
  std::string dataset;  // empty: shipped digits test split
  int adc_bits_min = 3;
  int adc_bits_max = 9;
  int seeds = 5;
  double sigma = 0.040;  // variation point of the sweep
  int weight_bits = 8;
};

struct SimConfig {
  MacroConfig macro;
  CalibrationTargets calibration;
  ExperimentParams experiment;
  NnParams nn;

  void validate() const;
};

/// Parses `[section]` / `key = value` text on top of the defaults. Errors carry `source:line:`.
SimConfig parse_config(std::istream& is, const std::string& source = "<config>");
SimConfig load_config(const std::filesystem::path& path);

/// `section.key=value`, applied after the file.
void apply_override(SimConfig& cfg, const std::string& assignment);

/// Every recognised key, `section.key`.
std::vector<std::string> config_keys();

/// Resolved config as pretty-printed JSON.
std::string config_json(const SimConfig& cfg);

}  // namespace fecim

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fecim/config.hpp"

namespace fecim::tools {

struct RunContext {
  SimConfig config;
  std::filesystem::path out_dir;
  std::filesystem::path data_dir;  // shipped model / dataset root
  int workers = 1;
};

struct Outcome {
  std::vector<std::string> files;       // written, relative to out_dir
  std::vector<std::string> violations;  // invariant checks that failed
  std::vector<std::string> summary;     // one line per headline number
};

const std::vector<std::string>& experiment_ids();
bool is_experiment(const std::string& id);

/// Runs one experiment and writes its CSVs into ctx.out_dir (created if needed).
Outcome run_experiment(const std::string& id, const RunContext& ctx);

/// Writes manifest.json: experiment id, seed, resolved config, overrides, artifacts, status.
void write_manifest(const std::string& id, const RunContext& ctx, const std::vector<std::string>& overrides,
                    const Outcome& outcome);

std::filesystem::path model_path(const RunContext& ctx);
std::filesystem::path dataset_path(const RunContext& ctx);

}  // namespace fecim::tools

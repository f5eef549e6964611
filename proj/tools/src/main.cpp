#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "experiments.hpp"
#include "fecim/errors.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

int workers_from_env() {
  const char* env = std::getenv("FECIM_WORKERS");
  if (env == nullptr || *env == '\0') return 1;
  try {
    const int n = std::stoi(env);
    if (n < 1) throw std::invalid_argument("workers");
    return n;
  } catch (const std::exception&) {
    throw fecim::ConfigError(fmt::format("FECIM_WORKERS must be a positive integer (got '{}')", env));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fecim: dual FeFET in-memory-compute macro simulator"};
  std::string experiment;
  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  std::vector<std::string> overrides;
  std::string validate_file;
  bool list = false;

  app.add_option("--experiment", experiment, "experiment id");
  app.add_option("--config", config_file, "INI config file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "master seed (overrides macro.seed)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--override", overrides, "section.key=value, repeatable");
  app.add_option("--validate-config", validate_file, "print the resolved config and exit")->check(CLI::ExistingFile);
  app.add_flag("--list", list, "list experiment ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  if (list) {
    for (const auto& id : fecim::tools::experiment_ids()) std::cout << id << "\n";
    return kOk;
  }

  fecim::tools::RunContext ctx;
  try {
    const std::string file = validate_file.empty() ? config_file : validate_file;
    if (!file.empty()) ctx.config = fecim::load_config(file);
    for (const auto& o : overrides) fecim::apply_override(ctx.config, o);
    if (seed) ctx.config.macro.seed = *seed;
    ctx.config.validate();
    if (!validate_file.empty()) {
      std::cout << fecim::config_json(ctx.config) << "\n";
      return kOk;
    }
    if (experiment.empty()) throw fecim::ConfigError("--experiment is required (see --list)");
    if (!fecim::tools::is_experiment(experiment)) throw fecim::ConfigError("unknown experiment '" + experiment + "'");
    ctx.workers = workers_from_env();
  } catch (const fecim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  }
  ctx.out_dir = out_dir;
  ctx.data_dir = FECIM_DATA_DIR;

  try {
    const auto outcome = fecim::tools::run_experiment(experiment, ctx);
    fecim::tools::write_manifest(experiment, ctx, overrides, outcome);
    for (const auto& line : outcome.summary) std::cout << line << "\n";
    for (const auto& v : outcome.violations) std::cerr << "violation: " << v << "\n";
    return outcome.violations.empty() ? kOk : kViolation;
  } catch (const fecim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kViolation;
  }
}

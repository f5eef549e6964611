#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path kTmp = FECIM_TEST_TMP;

int run(const std::string& args) {
  const std::string cmd = std::string(FECIM_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path write_config(const std::string& name, const std::string& text) {
  fs::create_directories(kTmp);
  const fs::path p = kTmp / name;
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST(Cli, UnknownExperimentIsUsageError) {
  EXPECT_EQ(run("--experiment fig99 --out " + (kTmp / "x").string()), 2);
}

TEST(Cli, MissingExperimentIsUsageError) { EXPECT_EQ(run("--out " + (kTmp / "x").string()), 2); }

TEST(Cli, BadFlagIsUsageError) { EXPECT_EQ(run("--frobnicate"), 2); }

TEST(Cli, BadConfigIsUsageError) {
  EXPECT_EQ(run("--validate-config " + write_config("rows.ini", "[macro]\nrows = 100\n").string()), 2);
  EXPECT_EQ(run("--experiment fig3_example --config " + write_config("bits.ini", "[adc]\nbits = 0\n").string()), 2);
  EXPECT_EQ(run("--experiment fig3_example --override adc.bits=0"), 2);
}

TEST(Cli, ValidateEmptyConfig) {
  EXPECT_EQ(run("--validate-config " + write_config("empty.ini", "").string()), 0);
}

TEST(Cli, InvariantViolationExitsOne) {
  const fs::path out = kTmp / "violation";
  EXPECT_EQ(run("--experiment fig3_example --override device.channel_on_resistance=1e6 --out " + out.string()), 1);
  const auto m = nlohmann::json::parse(slurp(out / "manifest.json"));
  EXPECT_EQ(m["status"], "invariant_violation");
}

TEST(Cli, ManifestRecordsResolvedConfigAndSeed) {
  const fs::path out = kTmp / "manifest";
  ASSERT_EQ(run("--experiment fig5_example --seed 77 --override adc.bits=6 --out " + out.string()), 0);
  const auto m = nlohmann::json::parse(slurp(out / "manifest.json"));
  EXPECT_EQ(m["experiment"], "fig5_example");
  EXPECT_EQ(m["seed"], 77);
  EXPECT_EQ(m["config"]["macro"]["seed"], 77);
  EXPECT_EQ(m["config"]["adc"]["bits"], 6);
  EXPECT_EQ(m["overrides"][0], "adc.bits=6");
  EXPECT_EQ(m["status"], "ok");
  EXPECT_TRUE(fs::exists(out / "fig5_example.csv"));
}

TEST(Cli, RerunIsByteIdentical) {
  for (const char* id : {"fig6_hist", "fig8_transfer", "oracle_equiv"}) {
    const fs::path a = kTmp / (std::string(id) + "_a");
    const fs::path b = kTmp / (std::string(id) + "_b");
    ASSERT_EQ(run(std::string("--experiment ") + id + " --seed 5 --override experiment.trials=8 --out " + a.string()), 0);
    ASSERT_EQ(run(std::string("--experiment ") + id + " --seed 5 --override experiment.trials=8 --out " + b.string()), 0);
    for (const auto& e : fs::directory_iterator(a)) {
      if (e.path().extension() != ".csv") continue;
      EXPECT_EQ(slurp(e.path()), slurp(b / e.path().filename())) << e.path();
    }
  }
}

TEST(Cli, SeedChangesMonteCarloOutput) {
  const fs::path a = kTmp / "seed_a";
  const fs::path b = kTmp / "seed_b";
  ASSERT_EQ(run("--experiment fig6_hist --seed 1 --override experiment.draws=500 --out " + a.string()), 0);
  ASSERT_EQ(run("--experiment fig6_hist --seed 2 --override experiment.draws=500 --out " + b.string()), 0);
  EXPECT_NE(slurp(a / "fig6_stats.csv"), slurp(b / "fig6_stats.csv"));
}

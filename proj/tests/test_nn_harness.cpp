#include <gtest/gtest.h>

#include <random>

#include "fecim/errors.hpp"
#include "fecim/nn_harness.hpp"
#include "fecim/oracles.hpp"
#include "support.hpp"

using namespace fecim;

namespace {

QuantLayer random_layer(std::mt19937_64& gen, std::size_t in, std::size_t out, bool last) {
  QuantLayer l;
  l.weights = test::random_weights(gen, in, out);
  l.bias.assign(out, 0.1);
  l.input_scale = 1.0 / 15.0;
  l.weight_scale = 0.01;
  l.relu = !last;
  l.output_bits = last ? 0 : 4;
  l.output_scale = last ? 0.0 : 0.5;
  return l;
}

const std::filesystem::path kData = std::filesystem::path(FECIM_DATA_DIR) / "digits";

}  // namespace

TEST(TileLayer, TileCounts) {
  std::mt19937_64 gen(1);
  const MacroConfig cfg;
  EXPECT_EQ(tile_layer(random_layer(gen, 128, 16, true), cfg).size(), 1u);
  EXPECT_EQ(tile_layer(random_layer(gen, 129, 16, true), cfg).size(), 2u);
  EXPECT_EQ(tile_layer(random_layer(gen, 300, 40, true), cfg).size(), 9u);
}

TEST(TileLayer, PartialTilesZeroPadded) {
  std::mt19937_64 gen(2);
  const auto tiles = tile_layer(random_layer(gen, 129, 17, true), MacroConfig{});
  ASSERT_EQ(tiles.size(), 4u);
  const TileCall& corner = tiles.back();
  EXPECT_EQ(corner.row_offset, 128u);
  EXPECT_EQ(corner.col_offset, 16u);
  int nonzero = 0;
  for (int v : corner.weights.values) nonzero += v != 0;
  EXPECT_LE(nonzero, 1);
}

TEST(TileLayer, TiledLayerEqualsUntiledOracle) {
  std::mt19937_64 gen(3);
  QuantModel model;
  model.layers.push_back(random_layer(gen, 300, 40, true));
  for (MacroKind kind : {MacroKind::CurFe, MacroKind::ChgFe}) {
    const MacroNetwork net(model, test::lossless(kind));
    for (int c = 0; c < 3; ++c) {
      const auto x = test::random_inputs(gen, 300, 4);
      const auto acc = net.layer_accumulate(0, x);
      for (std::size_t k = 0; k < 40; ++k) ASSERT_EQ(acc[k], exact_dot(x, model.layers[0].weights.column(k)));
    }
  }
}

TEST(LayerOutput, RequantizeAndClamp) {
  QuantLayer l;
  l.input_scale = 1.0;
  l.weight_scale = 0.5;
  l.bias = {0.0, 0.0, 0.0};
  l.output_bits = 4;
  l.output_scale = 1.0;
  const std::vector<std::int64_t> acc{-10, 5, 1000};
  const auto y = layer_output(l, acc);
  EXPECT_EQ(y, (std::vector<double>{0.0, 3.0, 15.0}));
}

TEST(Model, ShippedModelsLoad) {
  for (const char* name : {"model_w8.json", "model_w4.json"}) {
    const QuantModel m = load_model(kData / name);
    ASSERT_EQ(m.layers.size(), 2u);
    EXPECT_EQ(m.layers[0].weights.rows, 64u);
    EXPECT_EQ(m.layers[0].weights.cols, 32u);
    EXPECT_EQ(m.layers[1].weights.cols, 10u);
    EXPECT_EQ(m.layers[1].input_bits, 4);
  }
  const Dataset d = load_dataset(kData / "digits_test.csv");
  EXPECT_EQ(d.features.rows, 540u);
  EXPECT_EQ(d.features.cols, 64u);
}

TEST(Model, ValidationErrors) {
  std::mt19937_64 gen(4);
  QuantModel m;
  EXPECT_THROW(validate_model(m), ConfigError);
  m.layers.push_back(random_layer(gen, 8, 4, false));
  m.layers.push_back(random_layer(gen, 5, 2, true));
  EXPECT_THROW(validate_model(m), ConfigError);
  m.layers[1] = random_layer(gen, 4, 2, true);
  EXPECT_NO_THROW(validate_model(m));
  m.layers[0].weights.at(0, 0) = 200;
  EXPECT_THROW(validate_model(m), ConfigError);
}

TEST(Inference, LosslessEqualsIntegerReferencePerSample) {
  const QuantModel model = load_model(kData / "model_w8.json");
  const Dataset data = load_dataset(kData / "digits_test.csv");
  for (MacroKind kind : {MacroKind::CurFe, MacroKind::ChgFe}) {
    const MacroNetwork net(model, test::lossless(kind));
    for (std::size_t s = 0; s < data.features.rows; s += 5) {
      const auto x = data.features.row(s);
      ASSERT_EQ(net.forward(x), reference_forward(model, x)) << s;
    }
  }
}

TEST(Inference, SweepReportAndDeterminism) {
  const QuantModel model = load_model(kData / "model_w8.json");
  Dataset data = load_dataset(kData / "digits_test.csv");
  Sweep sweep;
  sweep.kinds = {MacroKind::CurFe};
  sweep.adc_bits = {5, 9};
  sweep.sigmas = {0.04};
  sweep.seeds = {1};
  const auto a = run_inference(model, data, MacroConfig{}, sweep, 1);
  const auto b = run_inference(model, data, MacroConfig{}, sweep, 3);
  ASSERT_EQ(a.results.size(), 2u);
  for (std::size_t i = 0; i < a.results.size(); ++i) {
    EXPECT_EQ(a.results[i].correct, b.results[i].correct);
    EXPECT_EQ(a.results[i].energy_joules, b.results[i].energy_joules);
    EXPECT_GE(a.results[i].accuracy, 0.0);
    EXPECT_LE(a.results[i].accuracy, 1.0);
    EXPECT_GT(a.results[i].energy_joules, 0.0);
  }
  EXPECT_GT(a.reference_accuracy, 0.9);
}

TEST(Inference, EmptyDatasetRejected) {
  const QuantModel model = load_model(kData / "model_w8.json");
  Dataset empty;
  empty.features = IntMatrix(0, 64, 4);
  EXPECT_THROW(run_inference(model, empty, MacroConfig{}, Sweep{}), ConfigError);
}

TEST(Inference, ScheduleCountsTiles) {
  const QuantModel model = load_model(kData / "model_w8.json");
  const MacroNetwork net(model, MacroConfig{});
  const auto s = net.schedule();
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].tiles, 2);
  EXPECT_EQ(s[1].tiles, 1);
}

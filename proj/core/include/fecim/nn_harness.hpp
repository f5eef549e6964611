#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fecim/macro_engine.hpp"
#include "fecim/matrix_io.hpp"
#include "fecim/perf_model.hpp"

namespace fecim {

/// Fully connected layer with integer weights (inputs x outputs) and
/// floating-scale requantization of its output.
struct QuantLayer {
  IntMatrix weights;
  int weight_bits = 8;
  int input_bits = 4;
  double input_scale = 1.0;
  double weight_scale = 1.0;
  std::vector<double> bias;
  bool relu = true;
  int output_bits = 4;  // 0 = final layer, emits real-valued logits
  double output_scale = 0.0;
};

struct QuantModel {
  std::string name;
  std::vector<QuantLayer> layers;
};

struct Dataset {
  IntMatrix features;  // samples x features, already at layer-0 input precision
  std::vector<int> labels;
};

/// JSON model description; weight files are resolved relative to the JSON.
QuantModel load_model(const std::filesystem::path& path);
/// Matrix file whose column 0 is the label and the rest are features.
Dataset load_dataset(const std::filesystem::path& path);
void validate_model(const QuantModel& model);

struct TileCall {
  std::size_t row_offset = 0;
  std::size_t col_offset = 0;
  IntMatrix weights;  // rows x banks, zero padded
};

/// ceil(rows / 128) x ceil(cols / 16) macro-sized tiles.
std::vector<TileCall> tile_layer(const QuantLayer& layer, const MacroConfig& cfg);

/// Requantized activations (hidden layers) or logits (final layer) from integer accumulators.
std::vector<double> layer_output(const QuantLayer& layer, std::span<const std::int64_t> acc);

/// Pure-integer reference inference; returns final-layer logits.
std::vector<double> reference_forward(const QuantModel& model, std::span<const int> x);

struct ForwardStats {
  double energy_joules = 0.0;
  double latency_seconds = 0.0;
  long saturation_flags = 0;
  long clipped_codes = 0;
};

/// A model mapped onto programmed macros (one device instance per tile).
class MacroNetwork {
 public:
  MacroNetwork(const QuantModel& model, const MacroConfig& cfg);

  std::vector<double> forward(std::span<const int> x, ForwardStats* stats = nullptr) const;
  /// Integer accumulators of one layer computed on the macros.
  std::vector<std::int64_t> layer_accumulate(std::size_t layer, std::span<const int> x,
                                             ForwardStats* stats = nullptr) const;
  std::vector<LayerSchedule> schedule() const;

 private:
  struct MappedTile {
    TileCall call;
    ProgrammedMacro macro;
  };

  const QuantModel* model_;
  MacroConfig cfg_;
  std::vector<std::vector<MappedTile>> tiles_;
};

std::size_t argmax(std::span<const double> v);

struct SweepPoint {
  MacroKind kind = MacroKind::CurFe;
  int adc_bits = 5;
  double sigma = 0.0;
  std::uint64_t seed = 1;
};

struct SweepResult {
  SweepPoint point;
  double accuracy = 0.0;
  long correct = 0;
  long samples = 0;
  double energy_joules = 0.0;  // whole dataset
  double latency_seconds = 0.0;
  long saturation_flags = 0;
  long clipped_codes = 0;
};

struct Sweep {
  std::vector<MacroKind> kinds{MacroKind::CurFe};
  std::vector<int> adc_bits{5};
  std::vector<double> sigmas{0.0};
  std::vector<std::uint64_t> seeds{1};
};

struct InferenceReport {
  std::string model;
  double reference_accuracy = 0.0;
  std::vector<SweepResult> results;
};

InferenceReport run_inference(const QuantModel& model, const Dataset& data, const MacroConfig& base,
                              const Sweep& sweep, int workers = 1);

double reference_accuracy(const QuantModel& model, const Dataset& data);

}  // namespace fecim

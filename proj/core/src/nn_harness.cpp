#include "fecim/nn_harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "fecim/errors.hpp"
#include "fecim/oracles.hpp"

namespace fecim {
namespace {

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

int weight_limit_low(int bits) { return -(1 << (bits - 1)); }
int weight_limit_high(int bits) { return (1 << (bits - 1)) - 1; }

}  // namespace

void validate_model(const QuantModel& model) {
  if (model.layers.empty()) throw ConfigError("model has no layers");
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const QuantLayer& layer = model.layers[l];
    const std::string where = fmt::format("layer {}: ", l);
    if (layer.weight_bits != 4 && layer.weight_bits != 8) throw ConfigError(where + "weight_bits must be 4 or 8");
    if (layer.input_bits < 1 || layer.input_bits > 8) throw ConfigError(where + "input_bits must be 1..8");
    if (layer.weights.rows < 1 || layer.weights.cols < 1) throw ConfigError(where + "empty weight matrix");
    for (int w : layer.weights.values) {
      if (w < weight_limit_low(layer.weight_bits) || w > weight_limit_high(layer.weight_bits)) {
        throw ConfigError(where + fmt::format("weight {} outside {}-bit range", w, layer.weight_bits));
      }
    }
    if (layer.bias.size() != layer.weights.cols) throw ConfigError(where + "bias length must equal output count");
    const bool last = l + 1 == model.layers.size();
    if (last != (layer.output_bits == 0)) throw ConfigError(where + "only the final layer has output_bits 0");
    if (!last) {
      const QuantLayer& next = model.layers[l + 1];
      if (next.weights.rows != layer.weights.cols) throw ConfigError(where + "output count != next layer inputs");
      if (next.input_bits != layer.output_bits) throw ConfigError(where + "output_bits != next layer input_bits");
      if (!(layer.output_scale > 0.0)) throw ConfigError(where + "output_scale must be > 0");
    }
  }
}

QuantModel load_model(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open model " + path.string());
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  QuantModel model;
  try {
    model.name = j.value("name", path.stem().string());
    int in_bits = j.at("input_bits").get<int>();
    double in_scale = j.at("input_scale").get<double>();
    for (const auto& jl : j.at("layers")) {
      QuantLayer layer;
      layer.weights = read_matrix(path.parent_path() / jl.at("weights").get<std::string>());
      layer.weight_bits = jl.at("weight_bits").get<int>();
      layer.weight_scale = jl.at("weight_scale").get<double>();
      layer.bias = jl.at("bias").get<std::vector<double>>();
      layer.relu = jl.at("relu").get<bool>();
      layer.output_bits = jl.at("output_bits").get<int>();
      layer.output_scale = jl.at("output_scale").get<double>();
      layer.input_bits = in_bits;
      layer.input_scale = in_scale;
      in_bits = layer.output_bits;
      in_scale = layer.output_scale;
      model.layers.push_back(std::move(layer));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  validate_model(model);
  return model;
}

Dataset load_dataset(const std::filesystem::path& path) {
  const IntMatrix m = read_matrix(path);
  if (m.cols < 2) throw ConfigError(path.string() + ": dataset needs a label column and features");
  Dataset d;
  d.features = IntMatrix(m.rows, m.cols - 1, m.precision);
  d.labels.resize(m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) {
    d.labels[r] = m.at(r, 0);
    for (std::size_t c = 1; c < m.cols; ++c) d.features.at(r, c - 1) = m.at(r, c);
  }
  return d;
}

std::vector<TileCall> tile_layer(const QuantLayer& layer, const MacroConfig& cfg) {
  const auto rows = static_cast<std::size_t>(cfg.geometry.rows);
  const auto cols = static_cast<std::size_t>(cfg.geometry.banks);
  std::vector<TileCall> tiles;
  for (std::size_t tr = 0; tr < ceil_div(layer.weights.rows, rows); ++tr) {
    for (std::size_t tc = 0; tc < ceil_div(layer.weights.cols, cols); ++tc) {
      TileCall t{tr * rows, tc * cols, IntMatrix(rows, cols, layer.weight_bits)};
      for (std::size_t r = 0; r < rows && t.row_offset + r < layer.weights.rows; ++r) {
        for (std::size_t c = 0; c < cols && t.col_offset + c < layer.weights.cols; ++c) {
          t.weights.at(r, c) = layer.weights.at(t.row_offset + r, t.col_offset + c);
        }
      }
      tiles.push_back(std::move(t));
    }
  }
  return tiles;
}

std::vector<double> layer_output(const QuantLayer& layer, std::span<const std::int64_t> acc) {
  std::vector<double> out(acc.size());
  const double scale = layer.input_scale * layer.weight_scale;
  const double top = layer.output_bits > 0 ? static_cast<double>((1 << layer.output_bits) - 1) : 0.0;
  for (std::size_t k = 0; k < acc.size(); ++k) {
    double y = static_cast<double>(acc[k]) * scale + layer.bias[k];
    if (layer.relu) y = std::max(y, 0.0);
    if (layer.output_bits > 0) y = std::clamp(std::round(y / layer.output_scale), 0.0, top);
    out[k] = y;
  }
  return out;
}

std::vector<double> reference_forward(const QuantModel& model, std::span<const int> x) {
  std::vector<int> act(x.begin(), x.end());
  std::vector<double> out;
  for (const QuantLayer& layer : model.layers) {
    if (act.size() != layer.weights.rows) throw MappingError("input length does not match layer inputs");
    std::vector<std::int64_t> acc(layer.weights.cols);
    for (std::size_t c = 0; c < layer.weights.cols; ++c) acc[c] = exact_dot(act, layer.weights.column(c));
    out = layer_output(layer, acc);
    act.assign(out.size(), 0);
    for (std::size_t k = 0; k < out.size(); ++k) act[k] = static_cast<int>(out[k]);
  }
  return out;
}

MacroNetwork::MacroNetwork(const QuantModel& model, const MacroConfig& cfg) : model_(&model), cfg_(cfg) {
  validate_model(model);
  std::uint64_t tile_index = 0;
  for (const QuantLayer& layer : model.layers) {
    MacroConfig layer_cfg = cfg_;
    layer_cfg.weight_bits = layer.weight_bits;
    std::vector<MappedTile> mapped;
    for (TileCall& call : tile_layer(layer, layer_cfg)) {
      ProgrammedMacro macro = program_macro(call.weights, layer_cfg, tile_index++);
      mapped.push_back({std::move(call), std::move(macro)});
    }
    tiles_.push_back(std::move(mapped));
  }
}

std::vector<std::int64_t> MacroNetwork::layer_accumulate(std::size_t l, std::span<const int> x,
                                                         ForwardStats* stats) const {
  const QuantLayer& layer = model_->layers.at(l);
  if (x.size() != layer.weights.rows) throw MappingError("input length does not match layer inputs");
  const auto rows = static_cast<std::size_t>(cfg_.geometry.rows);
  std::vector<std::int64_t> acc(layer.weights.cols, 0);
  std::vector<int> slice(rows);
  for (const MappedTile& t : tiles_[l]) {
    for (std::size_t r = 0; r < rows; ++r) {
      slice[r] = t.call.row_offset + r < x.size() ? x[t.call.row_offset + r] : 0;
    }
    const MacResult res = matvec(t.macro, slice, layer.input_bits);
    for (std::size_t c = 0; c < res.outputs.size() && t.call.col_offset + c < acc.size(); ++c) {
      acc[t.call.col_offset + c] += res.outputs[c];
    }
    if (stats) {
      stats->energy_joules += res.energy_joules;
      stats->latency_seconds += res.latency_seconds;
      stats->saturation_flags += res.saturation_flags;
      stats->clipped_codes += res.clipped_codes;
    }
  }
  return acc;
}

std::vector<double> MacroNetwork::forward(std::span<const int> x, ForwardStats* stats) const {
  std::vector<int> act(x.begin(), x.end());
  std::vector<double> out;
  for (std::size_t l = 0; l < model_->layers.size(); ++l) {
    const auto acc = layer_accumulate(l, act, stats);
    out = layer_output(model_->layers[l], acc);
    act.assign(out.size(), 0);
    for (std::size_t k = 0; k < out.size(); ++k) act[k] = static_cast<int>(out[k]);
  }
  return out;
}

std::vector<LayerSchedule> MacroNetwork::schedule() const {
  std::vector<LayerSchedule> s;
  for (std::size_t l = 0; l < tiles_.size(); ++l) {
    const QuantLayer& layer = model_->layers[l];
    s.push_back({fmt::format("fc{}", l + 1), static_cast<long>(tiles_[l].size()), layer.input_bits,
                 layer.weight_bits});
  }
  return s;
}

std::size_t argmax(std::span<const double> v) {
  return static_cast<std::size_t>(std::distance(v.begin(), std::max_element(v.begin(), v.end())));
}

double reference_accuracy(const QuantModel& model, const Dataset& data) {
  if (data.features.rows == 0) throw ConfigError("dataset is empty");
  long correct = 0;
  for (std::size_t s = 0; s < data.features.rows; ++s) {
    const auto logits = reference_forward(model, data.features.row(s));
    correct += static_cast<int>(argmax(logits)) == data.labels[s];
  }
  return static_cast<double>(correct) / static_cast<double>(data.features.rows);
}

InferenceReport run_inference(const QuantModel& model, const Dataset& data, const MacroConfig& base,
                              const Sweep& sweep, int workers) {
  if (data.features.rows == 0) throw ConfigError("dataset is empty");
  if (data.features.cols != model.layers.front().weights.rows) {
    throw ConfigError("dataset feature count does not match the model input");
  }
  InferenceReport report;
  report.model = model.name;
  report.reference_accuracy = reference_accuracy(model, data);
  const std::size_t n = data.features.rows;
  workers = std::max(1, std::min<int>(workers, static_cast<int>(n)));

  for (MacroKind kind : sweep.kinds) {
    for (double sigma : sweep.sigmas) {
      for (int bits : sweep.adc_bits) {
        for (std::uint64_t seed : sweep.seeds) {
          MacroConfig cfg = base;
          cfg.kind = kind;
          cfg.adc_bits = bits;
          cfg.seed = seed;
          cfg.set_vth_sigma(sigma);
          const MacroNetwork net(model, cfg);

          // per-sample slots so the totals do not depend on the worker count
          std::vector<std::uint8_t> hit(n, 0);
          std::vector<ForwardStats> stats(n);
          auto run = [&](std::size_t w) {
            for (std::size_t s = w; s < n; s += static_cast<std::size_t>(workers)) {
              const auto logits = net.forward(data.features.row(s), &stats[s]);
              hit[s] = static_cast<int>(argmax(logits)) == data.labels[s];
            }
          };
          {
            std::vector<std::jthread> pool;
            for (std::size_t w = 1; w < static_cast<std::size_t>(workers); ++w) pool.emplace_back(run, w);
            run(0);
          }
          SweepResult r;
          r.point = {kind, bits, sigma, seed};
          r.samples = static_cast<long>(n);
          for (std::size_t s = 0; s < n; ++s) {
            r.correct += hit[s];
            r.energy_joules += stats[s].energy_joules;
            r.latency_seconds += stats[s].latency_seconds;
            r.saturation_flags += stats[s].saturation_flags;
            r.clipped_codes += stats[s].clipped_codes;
          }
          r.accuracy = static_cast<double>(r.correct) / static_cast<double>(n);
          report.results.push_back(r);
        }
      }
    }
  }
  return report;
}

}  // namespace fecim

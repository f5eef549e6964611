#include "fecim/macro_engine.hpp"

#include <ostream>
#include <string>

#include <fmt/format.h>

#include "fecim/accumulation.hpp"
#include "fecim/array_chgfe.hpp"
#include "fecim/array_curfe.hpp"
#include "fecim/errors.hpp"
#include "fecim/perf_model.hpp"
#include "fecim/rng.hpp"
#include "fecim/stats.hpp"

namespace fecim {
namespace {

struct BlockReadout {
  double voltage = 0.0;
  bool flagged = false;
};

BlockReadout read_block(const MacroConfig& cfg, std::span<const DriveRow> drives,
                        std::span<const std::uint8_t> inputs) {
  if (cfg.kind == MacroKind::CurFe) {
    const CurfeOutput out = evaluate_curfe_drives(drives, inputs, cfg.device.curfe, cfg.device.tia);
    return {out.voltage, out.saturated};
  }
  const ChgfeParams& p = cfg.device.chgfe_array;
  const BlState s = evaluate_bl_drives(drives, inputs, p, precharge(p));
  return {charge_share(s), s.out_of_range};
}

std::vector<DriveRow> block_drives(const MacroConfig& cfg, const CellBlock& block, int& degenerate) {
  if (cfg.kind == MacroKind::CurFe) return curfe_drives(block, cfg.device.curfe);
  ChgfeDrives d = chgfe_drives(block, cfg.device.chgfe, cfg.device.chgfe_array);
  degenerate += d.degenerate_cells;
  return std::move(d.rows);
}

std::vector<int> nibbles_for(const IntMatrix& w, std::size_t col, std::size_t row0, std::size_t rows, BlockKind kind,
                             int weight_bits) {
  std::vector<int> out(rows, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    const int v = w.at(row0 + r, col);
    if (weight_bits == 8) {
      const WeightNibblePair p = encode_weight_8b(v);
      out[r] = kind == BlockKind::H4B ? p.high_value() : p.low_value();
    } else {
      out[r] = kind == BlockKind::H4B ? encode_weight_4b(v).value : 0;
    }
  }
  return out;
}

}  // namespace

ProgrammedMacro program_macro(const IntMatrix& weights, const MacroConfig& cfg, std::uint64_t trial) {
  cfg.validate();
  const MacroGeometry& g = cfg.geometry;
  if (weights.rows != static_cast<std::size_t>(g.rows) || weights.cols != static_cast<std::size_t>(g.banks)) {
    throw MappingError(fmt::format("weight matrix is {}x{}, macro expects {}x{}", weights.rows, weights.cols, g.rows,
                                   g.banks));
  }
  ProgrammedMacro m;
  m.config_ = cfg;
  m.weights_ = weights;
  const std::uint64_t seed = rng::derive(cfg.seed, trial);
  const double sigma = cfg.vth_sigma();
  const auto groups = static_cast<std::size_t>(g.groups());
  const auto rpg = static_cast<std::size_t>(g.rows_per_group);
  m.blocks_.resize(static_cast<std::size_t>(g.banks) * 2 * groups);
  m.drives_.resize(m.blocks_.size());

  for (int bank = 0; bank < g.banks; ++bank) {
    for (BlockKind kind : {BlockKind::H4B, BlockKind::L4B}) {
      for (std::size_t grp = 0; grp < groups; ++grp) {
        const auto nib = nibbles_for(weights, static_cast<std::size_t>(bank), grp * rpg, rpg, kind, cfg.weight_bits);
        std::vector<double> dev(rpg * kNibbleBits, 0.0);
        for (std::size_t r = 0; r < rpg; ++r) {
          for (int j = 0; j < kNibbleBits; ++j) {
            dev[r * kNibbleBits + static_cast<std::size_t>(j)] =
                sample_vth(seed, static_cast<std::uint32_t>(grp * rpg + r), array_column(bank, kind, j), sigma)
                    .deviation;
          }
        }
        const std::size_t idx = m.index(bank, kind, static_cast<int>(grp));
        m.blocks_[idx] = make_block(kind, nib, dev);
        m.drives_[idx] = block_drives(cfg, m.blocks_[idx], m.degenerate_cells_);
      }
    }
  }
  return m;
}

IntMatrix ProgrammedMacro::read_back() const {
  const MacroGeometry& g = config_.geometry;
  IntMatrix out(static_cast<std::size_t>(g.rows), static_cast<std::size_t>(g.banks), config_.weight_bits);
  for (int bank = 0; bank < g.banks; ++bank) {
    for (int grp = 0; grp < g.groups(); ++grp) {
      const CellBlock& hi = block(bank, BlockKind::H4B, grp);
      const CellBlock& lo = block(bank, BlockKind::L4B, grp);
      for (std::size_t r = 0; r < hi.rows.size(); ++r) {
        NibbleBits hb{}, lb{};
        for (int j = 0; j < kNibbleBits; ++j) {
          hb[j] = hi.rows[r][j].stored;
          lb[j] = lo.rows[r][j].stored;
        }
        const int high = decode_nibble(hb, NibbleMode::TwosComplement);
        const int value = config_.weight_bits == 8 ? 16 * high + decode_nibble(lb, NibbleMode::Unsigned) : high;
        out.at(static_cast<std::size_t>(grp) * hi.rows.size() + r, static_cast<std::size_t>(bank)) = value;
      }
    }
  }
  return out;
}

MacResult matvec(const ProgrammedMacro& macro, std::span<const int> x, int input_bits, bool keep_traces) {
  const MacroConfig& cfg = macro.config();
  const MacroGeometry& g = cfg.geometry;
  if (input_bits < 1 || input_bits > 8) throw ConfigError("input precision must be 1..8");
  if (x.size() != static_cast<std::size_t>(g.rows)) throw MappingError("input vector length must equal macro rows");

  // bit planes, LSB first
  std::vector<std::vector<std::uint8_t>> planes(static_cast<std::size_t>(input_bits),
                                                std::vector<std::uint8_t>(x.size()));
  for (std::size_t r = 0; r < x.size(); ++r) {
    const InputBitStream s = encode_input(x[r], input_bits);
    for (int i = 0; i < input_bits; ++i) planes[static_cast<std::size_t>(i)][r] = s.bits[static_cast<std::size_t>(i)];
  }

  const AnalogTransfer transfer = cfg.transfer();
  const AdcConfig high_adc =
      make_reference(NibbleMode::TwosComplement, cfg.adc_bits, g.rows_per_group, cfg.kind, transfer);
  const AdcConfig low_adc = make_reference(NibbleMode::Unsigned, cfg.adc_bits, g.rows_per_group, cfg.kind, transfer);
  const bool has_low = cfg.weight_bits == 8;
  const auto rpg = static_cast<std::size_t>(g.rows_per_group);

  MacResult result;
  result.outputs.assign(static_cast<std::size_t>(g.banks), 0);
  result.degenerate_cells = macro.degenerate_cells();
  for (int bank = 0; bank < g.banks; ++bank) {
    AccumulatorState acc;
    for (int i = 0; i < input_bits; ++i) {
      AccumulatorState groups;
      for (int grp = 0; grp < g.groups(); ++grp) {
        const std::span<const std::uint8_t> in(planes[static_cast<std::size_t>(i)].data() + grp * rpg, rpg);
        const BlockReadout hi = read_block(cfg, macro.drives(bank, BlockKind::H4B, grp), in);
        const AdcCode hc = convert(hi.voltage, high_adc);
        result.saturation_flags += hi.flagged;
        result.clipped_codes += hc.clipped;
        BlockReadout lo;
        AdcCode lc;
        std::int32_t partial = dequantize(hc, high_adc);
        if (has_low) {
          lo = read_block(cfg, macro.drives(bank, BlockKind::L4B, grp), in);
          lc = convert(lo.voltage, low_adc);
          result.saturation_flags += lo.flagged;
          result.clipped_codes += lc.clipped;
          partial = combine_nibbles(partial, dequantize(lc, low_adc));
        }
        groups = accumulate_row_group(groups, partial);
        if (keep_traces) result.traces.push_back({bank, i, grp, hi.voltage, lo.voltage, hc.code, lc.code});
      }
      acc = accumulate_input_bit(acc, groups.running_total, i);
    }
    result.outputs[static_cast<std::size_t>(bank)] = acc.running_total;
  }
  result.energy_joules = energy_of_matvec(cfg, input_bits, cfg.weight_bits);
  result.latency_seconds = latency_of_matvec(cfg, input_bits);
  return result;
}

TransferTable monte_carlo_transfer(const MacroConfig& cfg, BlockKind block, int trials,
                                   std::span<const int> nibble_sweep) {
  cfg.validate();
  if (trials < 1) throw ConfigError("monte carlo needs at least one trial");
  const NibbleMode mode = block_mode(block);
  std::vector<int> nibbles(nibble_sweep.begin(), nibble_sweep.end());
  if (nibbles.empty()) {
    for (int v = nibble_min(mode); v <= nibble_max(mode); ++v) nibbles.push_back(v);
  }
  const auto rows = static_cast<std::size_t>(cfg.geometry.rows_per_group);
  const double sigma = cfg.vth_sigma();

  TransferTable table;
  table.kind = cfg.kind;
  table.block = block;
  table.transfer = cfg.transfer();
  table.trials = trials;

  const std::size_t n_points = nibbles.size() * (rows + 1);
  std::vector<std::vector<double>> samples(n_points, std::vector<double>(static_cast<std::size_t>(trials)));
  std::vector<std::uint8_t> inputs(rows);
  std::vector<double> dev(rows * kNibbleBits);
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t seed = rng::derive(cfg.seed, static_cast<std::uint64_t>(t));
    for (std::size_t r = 0; r < rows; ++r) {
      for (int j = 0; j < kNibbleBits; ++j) {
        dev[r * kNibbleBits + static_cast<std::size_t>(j)] =
            sample_vth(seed, static_cast<std::uint32_t>(r), array_column(0, block, j), sigma).deviation;
      }
    }
    for (std::size_t n = 0; n < nibbles.size(); ++n) {
      const std::vector<int> values(rows, nibbles[n]);
      const CellBlock cells = make_block(block, values, dev);
      int degenerate = 0;
      const auto drives = block_drives(cfg, cells, degenerate);
      for (std::size_t k = 0; k <= rows; ++k) {
        for (std::size_t r = 0; r < rows; ++r) inputs[r] = r < k ? 1 : 0;
        samples[n * (rows + 1) + k][static_cast<std::size_t>(t)] = read_block(cfg, drives, inputs).voltage;
      }
    }
  }

  const double vpv = table.transfer.volts_per_value;
  for (std::size_t n = 0; n < nibbles.size(); ++n) {
    for (std::size_t k = 0; k <= rows; ++k) {
      const auto& s = samples[n * (rows + 1) + k];
      TransferPoint p;
      p.active_rows = static_cast<int>(k);
      p.nibble = nibbles[n];
      p.target = p.active_rows * p.nibble;
      p.mean_v = stats::mean(s);
      p.std_v = stats::stddev(s);
      p.mean_value = (p.mean_v - table.transfer.v_zero) / vpv;
      p.std_value = p.std_v / std::abs(vpv);
      table.points.push_back(p);
    }
  }
  return table;
}

void write_transfer_csv(std::ostream& os, const TransferTable& table) {
  os << "macro,block,active_rows,nibble,target,mean_v,std_v,mean_value,std_value\n";
  const char* block = table.block == BlockKind::H4B ? "H4B" : "L4B";
  for (const auto& p : table.points) {
    os << fmt::format("{},{},{},{},{},{:.9f},{:.6e},{:.6f},{:.6e}\n", to_string(table.kind), block, p.active_rows,
                      p.nibble, p.target, p.mean_v, p.std_v, p.mean_value, p.std_value);
  }
}

}  // namespace fecim

#include "experiments.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>

#include <fmt/format.h>
#include <json.hpp>

#include "fecim/array_chgfe.hpp"
#include "fecim/array_curfe.hpp"
#include "fecim/block.hpp"
#include "fecim/encoding.hpp"
#include "fecim/errors.hpp"
#include "fecim/macro_engine.hpp"
#include "fecim/nn_harness.hpp"
#include "fecim/oracles.hpp"
#include "fecim/perf_model.hpp"
#include "fecim/rng.hpp"
#include "fecim/stats.hpp"

namespace fecim::tools {
namespace {

std::ofstream open_csv(const RunContext& ctx, const std::string& name, Outcome& o) {
  std::filesystem::create_directories(ctx.out_dir);
  std::ofstream os(ctx.out_dir / name);
  if (!os) throw Error("cannot write " + (ctx.out_dir / name).string());
  o.files.push_back(name);
  return os;
}

const char* block_name(BlockKind k) { return k == BlockKind::H4B ? "H4B" : "L4B"; }

constexpr std::array<MacroKind, 2> kKinds{MacroKind::CurFe, MacroKind::ChgFe};

// Fig. 3: one active row, input 1, weight 0b11111111 on the current-mode block.
Outcome fig3_example(const RunContext& ctx) {
  Outcome o;
  const MacroConfig& m = ctx.config.macro;
  auto csv = open_csv(ctx, "fig3_example.csv", o);
  auto cells = open_csv(ctx, "fig3_cells.csv", o);
  csv << "channel_on_resistance,block,net_current_a,expected_a,abs_error_a,rel_error,voltage_v,saturated\n";
  cells << "channel_on_resistance,block,bit,current_a\n";

  const WeightNibblePair w = encode_weight_8b(-1);
  const std::array<std::uint8_t, 1> input{1};
  for (double rch : {0.0, m.device.curfe.channel_on_resistance}) {
    NFeFET1RModel dev = m.device.curfe;
    dev.channel_on_resistance = rch;
    const double unit = dev.bias_voltage / dev.ladder_base_resistance;
    const double sign = (dev.supply_voltage - dev.bias_voltage) / dev.ladder_base_resistance;
    for (BlockKind kind : {BlockKind::H4B, BlockKind::L4B}) {
      const std::array<int, 1> nib{kind == BlockKind::H4B ? w.high_value() : w.low_value()};
      const CellBlock block = make_block(kind, nib);
      const CurfeOutput out = evaluate_curfe_block(block, input, dev, m.device.tia);
      const double expected = kind == BlockKind::H4B ? 7.0 * unit - 8.0 * sign : 15.0 * unit;
      const double err = std::abs(out.net_current - expected);
      const double rel = err / std::abs(expected);
      csv << fmt::format("{},{},{},{},{},{},{},{}\n", rch, block_name(kind), out.net_current, expected, err, rel,
                         out.voltage, out.saturated ? 1 : 0);
      for (const auto& e : trace_curfe_block(block, input, dev)) {
        cells << fmt::format("{},{},{},{}\n", rch, block_name(kind), e.bit, e.current);
      }
      const bool ok = rch == 0.0 ? err <= 1e-12 : rel <= 0.02;
      if (!ok) {
        o.violations.push_back(fmt::format("{} net current {} A vs expected {} A (r_ch {})", block_name(kind),
                                           out.net_current, expected, rch));
      }
      o.summary.push_back(fmt::format("r_ch={} {}: {:.6e} A (expected {:.6e} A)", rch, block_name(kind),
                                      out.net_current, expected));
    }
  }
  return o;
}

// Fig. 5: same operands on the charge-mode block, BL waveforms and the shared voltage.
Outcome fig5_example(const RunContext& ctx) {
  Outcome o;
  const MacroConfig& m = ctx.config.macro;
  const ChgfeParams& p = m.device.chgfe_array;
  auto csv = open_csv(ctx, "fig5_example.csv", o);
  auto trace = open_csv(ctx, "fig5_bl_trace.csv", o);
  csv << "block,shared_v,expected_v,abs_error_v,out_of_range\n";
  trace << "block,phase,bl0_v,bl1_v,bl2_v,bl3_v\n";

  const WeightNibblePair w = encode_weight_8b(-1);
  const std::array<std::uint8_t, 1> input{1};
  const double unit = chgfe_unit_step(m.device.chgfe, p);
  for (BlockKind kind : {BlockKind::H4B, BlockKind::L4B}) {
    const std::array<int, 1> nib{kind == BlockKind::H4B ? w.high_value() : w.low_value()};
    const CellBlock block = make_block(kind, nib);
    const BlState pre = precharge(p);
    const BlState ev = evaluate_bls(block, input, m.device.chgfe, p, pre);
    const double shared = charge_share(ev);
    const double expected = p.v_pre + (kind == BlockKind::H4B ? 1.0 : -15.0) * unit / 4.0;
    const double err = std::abs(shared - expected);
    csv << fmt::format("{},{},{},{},{}\n", block_name(kind), shared, expected, err, ev.out_of_range ? 1 : 0);
    auto row = [&](const char* phase, const std::array<double, kNibbleBits>& v) {
      trace << fmt::format("{},{},{},{},{},{}\n", block_name(kind), phase, v[0], v[1], v[2], v[3]);
    };
    row("precharge", pre.voltages);
    row("evaluate", ev.voltages);
    row("share", {shared, shared, shared, shared});
    if (err > 1e-9) {
      o.violations.push_back(fmt::format("{} shared voltage {} V vs expected {} V", block_name(kind), shared, expected));
    }
    o.summary.push_back(fmt::format("{}: {:.9f} V (expected {:.9f} V)", block_name(kind), shared, expected));
  }
  return o;
}

double bit_current(const MacroConfig& m, MacroKind kind, int bit, double dev) {
  if (kind == MacroKind::CurFe) return cell_current_curfe(m.device.curfe, bit, false, true, true, dev);
  return mlc_on_current(m.device.chgfe, bit, Polarity::NType, dev).amps;
}

// Fig. 6: per-bit ON-current populations under Vth variation.
Outcome fig6_hist(const RunContext& ctx) {
  Outcome o;
  const MacroConfig& m = ctx.config.macro;
  const double sigma = m.vth_sigma();
  const long draws = ctx.config.experiment.draws;
  constexpr int kBins = 60;
  constexpr double kLo = 0.4;
  constexpr double kHi = 1.6;
  auto hist = open_csv(ctx, "fig6_hist.csv", o);
  auto st = open_csv(ctx, "fig6_stats.csv", o);
  hist << "macro,bit,bin_low,bin_high,count\n";
  st << "macro,bit,nominal_a,mean_a,std_a,rel_std,draws\n";

  std::map<MacroKind, std::array<double, kNibbleBits>> rel;
  for (std::size_t k = 0; k < kKinds.size(); ++k) {
    const MacroKind kind = kKinds[k];
    const std::uint64_t seed = rng::derive(m.seed, 0x600 + k);
    for (int bit = 0; bit < kNibbleBits; ++bit) {
      const double nominal = bit_current(m, kind, bit, 0.0);
      std::vector<double> samples(static_cast<std::size_t>(draws));
      std::array<long, kBins> counts{};
      for (long i = 0; i < draws; ++i) {
        const double dev =
            sample_vth(seed, static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(bit), sigma).deviation;
        const double cur = bit_current(m, kind, bit, dev);
        samples[static_cast<std::size_t>(i)] = cur;
        const double x = (cur / nominal - kLo) / (kHi - kLo) * kBins;
        counts[static_cast<std::size_t>(std::clamp(static_cast<int>(std::floor(x)), 0, kBins - 1))]++;
      }
      const double mean = stats::mean(samples);
      const double sd = stats::stddev(samples);
      rel[kind][static_cast<std::size_t>(bit)] = sd / mean;
      st << fmt::format("{},{},{},{},{},{},{}\n", to_string(kind), bit, nominal, mean, sd, sd / mean, draws);
      for (int b = 0; b < kBins; ++b) {
        const double lo = kLo + (kHi - kLo) * b / kBins;
        const double hi = kLo + (kHi - kLo) * (b + 1) / kBins;
        hist << fmt::format("{},{},{:.4f},{:.4f},{}\n", to_string(kind), bit, lo, hi, counts[static_cast<std::size_t>(b)]);
      }
      o.summary.push_back(fmt::format("{} bit {}: relative std {:.5f}", to_string(kind), bit, sd / mean));
    }
  }
  if (sigma > 0.0) {
    for (std::size_t b = 0; b < kNibbleBits; ++b) {
      if (!(rel[MacroKind::CurFe][b] < rel[MacroKind::ChgFe][b])) {
        o.violations.push_back(fmt::format("bit {}: curfe relative std {} not below chgfe {}", b,
                                           rel[MacroKind::CurFe][b], rel[MacroKind::ChgFe][b]));
      }
      if (b > 0 && !(rel[MacroKind::ChgFe][b] < rel[MacroKind::ChgFe][b - 1])) {
        o.violations.push_back(fmt::format("chgfe relative std does not decrease from bit {} to bit {}", b - 1, b));
      }
    }
  }
  return o;
}

// Fig. 8: block transfer (mean analog output vs target MAC) and its linear fit.
Outcome fig8_transfer(const RunContext& ctx) {
  Outcome o;
  auto csv = open_csv(ctx, "fig8_transfer.csv", o);
  auto fit = open_csv(ctx, "fig8_fit.csv", o);
  csv << "macro,block,sigma,active_rows,nibble,target,mean_v,std_v,mean_value,std_value\n";
  fit << "macro,block,sigma,trials,slope,intercept,r_squared\n";
  const double sigma = ctx.config.macro.vth_sigma();
  std::vector<double> sigmas{0.0};
  if (sigma > 0.0) sigmas.push_back(sigma);

  for (MacroKind kind : kKinds) {
    for (BlockKind block : {BlockKind::H4B, BlockKind::L4B}) {
      for (double s : sigmas) {
        MacroConfig cfg = ctx.config.macro;
        cfg.kind = kind;
        cfg.set_vth_sigma(s);
        const int trials = s == 0.0 ? 2 : ctx.config.experiment.trials;
        const TransferTable t = monte_carlo_transfer(cfg, block, trials);
        std::vector<double> x, y;
        for (const TransferPoint& p : t.points) {
          csv << fmt::format("{},{},{},{},{},{},{:.12f},{:.6e},{:.9f},{:.6e}\n", to_string(kind), block_name(block), s,
                             p.active_rows, p.nibble, p.target, p.mean_v, p.std_v, p.mean_value, p.std_value);
          x.push_back(p.target);
          y.push_back(p.mean_v);
        }
        const stats::LinearFit f = stats::linear_fit(x, y);
        fit << fmt::format("{},{},{},{},{},{},{:.9f}\n", to_string(kind), block_name(block), s, trials, f.slope,
                           f.intercept, f.r_squared);
        o.summary.push_back(
            fmt::format("{} {} sigma={}: R^2 = {:.7f}", to_string(kind), block_name(block), s, f.r_squared));
        const double need = s == 0.0 ? 0.9999 : (kind == MacroKind::CurFe ? 0.999 : 0.0);
        if (f.r_squared < need) {
          o.violations.push_back(fmt::format("{} {} sigma={}: R^2 {} below {}", to_string(kind), block_name(block), s,
                                             f.r_squared, need));
        }
      }
    }
  }
  return o;
}

// Fig. 7: efficiency and latency over input / weight precision.
Outcome fig7_efficiency(const RunContext& ctx) {
  Outcome o;
  auto csv = open_csv(ctx, "fig7_efficiency.csv", o);
  csv << "macro,input_bits,weight_bits,adc_bits,tops_per_watt,energy_j,array_j,driver_j,adc_j,digital_j,latency_s\n";
  const SimConfig& c = ctx.config;
  const std::array<int, 4> inputs{1, 2, 4, 8};
  const std::array<int, 2> weights{4, 8};
  std::map<std::tuple<MacroKind, int, int>, double> eff;
  std::map<std::pair<MacroKind, int>, double> lat;
  for (MacroKind kind : kKinds) {
    MacroConfig cfg = c.macro;
    cfg.kind = kind;
    for (int wb : weights) {
      cfg.weight_bits = wb;
      for (int ib : inputs) {
        const EnergyBreakdown e = energy_breakdown(cfg, ib, wb);
        const double tops = efficiency_tops_per_watt(cfg, ib, wb);
        const double t = latency_of_matvec(cfg, ib);
        eff[{kind, ib, wb}] = tops;
        lat[{kind, ib}] = t;
        csv << fmt::format("{},{},{},{},{:.6f},{},{},{},{},{},{}\n", to_string(kind), ib, wb, cfg.adc_bits, tops,
                           e.total(), e.array, e.driver, e.adc, e.digital, t);
      }
    }
  }

  if (c.macro.adc_bits == c.calibration.adc_bits) {
    const std::array<std::pair<MacroKind, double>, 2> anchors{
        {{MacroKind::CurFe, c.calibration.curfe_tops_per_watt}, {MacroKind::ChgFe, c.calibration.chgfe_tops_per_watt}}};
    for (const auto& [kind, target] : anchors) {
      const double got = eff[{kind, c.calibration.input_bits, c.calibration.weight_bits}];
      o.summary.push_back(fmt::format("{} 8b/8b: {:.4f} TOPS/W (anchor {})", to_string(kind), got, target));
      if (std::abs(got - target) > 0.01 * target) {
        o.violations.push_back(fmt::format("{} efficiency {} outside 1% of {}", to_string(kind), got, target));
      }
    }
  }
  for (MacroKind kind : kKinds) {
    for (int wb : weights) {
      for (std::size_t i = 1; i < inputs.size(); ++i) {
        if (eff[{kind, inputs[i], wb}] > eff[{kind, inputs[i - 1], wb}]) {
          o.violations.push_back(fmt::format("{} efficiency rises from {}b to {}b inputs", to_string(kind),
                                             inputs[i - 1], inputs[i]));
        }
      }
    }
    for (int ib : inputs) {
      if (eff[{kind, ib, 8}] > eff[{kind, ib, 4}]) {
        o.violations.push_back(fmt::format("{} efficiency rises from 4b to 8b weights at {}b inputs",
                                           to_string(kind), ib));
      }
    }
  }
  for (int wb : weights) {
    for (int ib : inputs) {
      if (!(eff[{MacroKind::ChgFe, ib, wb}] > eff[{MacroKind::CurFe, ib, wb}])) {
        o.violations.push_back(fmt::format("chgfe not above curfe at {}b/{}b", ib, wb));
      }
    }
  }
  for (int ib : inputs) {
    if (!(lat[{MacroKind::ChgFe, ib}] > lat[{MacroKind::CurFe, ib}])) {
      o.violations.push_back(fmt::format("chgfe latency not above curfe at {}b inputs", ib));
    }
  }
  o.summary.push_back(fmt::format("latency 8b inputs: curfe {:.3e} s, chgfe {:.3e} s",
                                  lat[{MacroKind::CurFe, 8}], lat[{MacroKind::ChgFe, 8}]));
  return o;
}

Sweep accuracy_sweep(const SimConfig& c) {
  Sweep s;
  s.kinds.assign(kKinds.begin(), kKinds.end());
  s.adc_bits.clear();
  for (int b = c.nn.adc_bits_min; b <= c.nn.adc_bits_max; ++b) s.adc_bits.push_back(b);
  s.sigmas = {0.0};
  if (c.nn.sigma > 0.0) s.sigmas.push_back(c.nn.sigma);
  s.seeds.clear();
  for (int k = 0; k < c.nn.seeds; ++k) s.seeds.push_back(c.macro.seed + static_cast<std::uint64_t>(k));
  return s;
}

// Fig. 9 substitute: ADC resolution and variation sweep on the digits MLP.
Outcome fig9_accuracy(const RunContext& ctx) {
  Outcome o;
  const SimConfig& c = ctx.config;
  const QuantModel model = load_model(model_path(ctx));
  const Dataset data = load_dataset(dataset_path(ctx));
  const InferenceReport rep = run_inference(model, data, c.macro, accuracy_sweep(c), ctx.workers);

  auto csv = open_csv(ctx, "fig9_accuracy.csv", o);
  auto sum = open_csv(ctx, "fig9_summary.csv", o);
  csv << "macro,sigma,adc_bits,seed,accuracy,correct,samples,energy_j,latency_s,saturation_flags,clipped_codes\n";
  sum << "macro,sigma,adc_bits,mean_accuracy,min_accuracy,max_accuracy,reference_accuracy\n";

  std::map<std::tuple<MacroKind, double, int>, std::vector<double>> grid;
  for (const SweepResult& r : rep.results) {
    const SweepPoint& p = r.point;
    csv << fmt::format("{},{},{},{},{:.6f},{},{},{},{},{},{}\n", to_string(p.kind), p.sigma, p.adc_bits, p.seed,
                       r.accuracy, r.correct, r.samples, r.energy_joules, r.latency_seconds, r.saturation_flags,
                       r.clipped_codes);
    grid[{p.kind, p.sigma, p.adc_bits}].push_back(r.accuracy);
  }
  std::map<std::tuple<MacroKind, double, int>, double> mean;
  for (const auto& [key, accs] : grid) {
    const auto [kind, sigma, bits] = key;
    mean[key] = stats::mean(accs);
    sum << fmt::format("{},{},{},{:.6f},{:.6f},{:.6f},{:.6f}\n", to_string(kind), sigma, bits, mean[key],
                       *std::min_element(accs.begin(), accs.end()), *std::max_element(accs.begin(), accs.end()),
                       rep.reference_accuracy);
  }
  o.summary.push_back(fmt::format("integer reference accuracy {:.4f} on {} samples", rep.reference_accuracy,
                                  data.features.rows));

  const int lo = c.nn.adc_bits_min;
  const int hi = c.nn.adc_bits_max;
  for (MacroKind kind : kKinds) {
    const auto at = [&](int bits) { return mean[{kind, 0.0, bits}]; };
    std::string line = fmt::format("{} sigma=0:", to_string(kind));
    for (int b = lo; b <= hi; ++b) line += fmt::format(" {}b={:.4f}", b, at(b));
    o.summary.push_back(line);
    if (hi >= 9 && lo <= 9) {
      for (double a : grid[{kind, 0.0, 9}]) {
        if (a != rep.reference_accuracy) {
          o.violations.push_back(fmt::format("{} 9-bit accuracy {} differs from reference {}", to_string(kind), a,
                                             rep.reference_accuracy));
        }
      }
    }
    int inversions = 0;
    for (int b = lo + 1; b <= hi; ++b) {
      const double drop = at(b - 1) - at(b);
      if (drop > 0.0) {
        ++inversions;
        if (drop > 0.005 + 1e-12) {
          o.violations.push_back(fmt::format("{} accuracy drops {:.4f} from {}b to {}b", to_string(kind), drop, b - 1, b));
        }
      }
    }
    if (inversions > 1) o.violations.push_back(fmt::format("{} accuracy has {} inversions", to_string(kind), inversions));
    if (lo <= 5 && hi >= 9 && at(9) - at(5) > 0.02 + 1e-12) {
      o.violations.push_back(fmt::format("{} 5-bit accuracy {:.4f} more than 2pp below 9-bit {:.4f}",
                                         to_string(kind), at(5), at(9)));
    }
  }
  if (c.nn.sigma > 0.0 && lo <= 5 && hi >= 5) {
    const double cur = mean[{MacroKind::CurFe, c.nn.sigma, 5}];
    const double chg = mean[{MacroKind::ChgFe, c.nn.sigma, 5}];
    o.summary.push_back(fmt::format("sigma={} 5-bit: curfe {:.4f}, chgfe {:.4f}", c.nn.sigma, cur, chg));
    if (cur < chg - 0.01 - 1e-12) {
      o.violations.push_back(fmt::format("curfe accuracy {:.4f} more than 1pp below chgfe {:.4f}", cur, chg));
    }
  }
  return o;
}

// Fig. 10: per-layer energy / latency of one inference on each macro.
Outcome fig10_breakdown(const RunContext& ctx) {
  Outcome o;
  const QuantModel model = load_model(model_path(ctx));
  auto csv = open_csv(ctx, "fig10_breakdown.csv", o);
  csv << "macro,layer,tiles,input_bits,weight_bits,array_j,driver_j,adc_j,digital_j,total_j,latency_s\n";
  for (MacroKind kind : kKinds) {
    MacroConfig cfg = ctx.config.macro;
    cfg.kind = kind;
    const MacroNetwork net(model, cfg);
    const auto sched = net.schedule();
    const auto costs = layer_breakdown(sched, cfg);
    EnergyBreakdown total;
    double latency = 0.0;
    for (std::size_t l = 0; l < costs.size(); ++l) {
      const LayerCost& lc = costs[l];
      csv << fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", to_string(kind), lc.name, lc.tiles,
                         sched[l].input_bits, sched[l].weight_bits, lc.energy.array, lc.energy.driver, lc.energy.adc,
                         lc.energy.digital, lc.energy.total(), lc.latency_seconds);
      total += lc.energy;
      latency += lc.latency_seconds;
      if (!(lc.energy.total() > 0.0)) o.violations.push_back(fmt::format("{} {}: zero energy", to_string(kind), lc.name));
    }
    o.summary.push_back(fmt::format("{}: {:.4e} J, {:.4e} s per inference", to_string(kind), total.total(), latency));
  }
  return o;
}

int random_in(std::uint64_t seed, std::uint64_t a, std::uint64_t b, int lo, int hi) {
  return lo + static_cast<int>(rng::key(seed, a, b) % static_cast<std::uint64_t>(hi - lo + 1));
}

struct EquivCount {
  long cases = 0;
  long mismatches = 0;
  long long max_error = 0;
};

void compare(const MacResult& r, const IntMatrix& w, std::span<const int> x, EquivCount& n) {
  for (std::size_t c = 0; c < w.cols; ++c) {
    const auto exact = exact_dot(x, w.column(c));
    const long long err = std::llabs(static_cast<long long>(r.outputs[c]) - exact);
    n.mismatches += err != 0;
    n.max_error = std::max(n.max_error, err);
  }
}

// Simulated digital output vs the integer dot product, lossless ADC, no variation.
Outcome oracle_equiv(const RunContext& ctx) {
  Outcome o;
  const SimConfig& c = ctx.config;
  auto csv = open_csv(ctx, "oracle_equiv.csv", o);
  csv << "macro,part,input_bits,adc_bits,matvecs,cases,mismatches,max_abs_error\n";
  const MacroGeometry& g = c.macro.geometry;
  const auto rows = static_cast<std::size_t>(g.rows);
  const auto banks = static_cast<std::size_t>(g.banks);
  const long fills_per_matvec = static_cast<long>(g.banks) * g.groups();
  const long part_a = std::max(1L, (c.experiment.configs + fills_per_matvec - 1) / fills_per_matvec);
  const int in_bits = c.experiment.input_bits;

  for (MacroKind kind : kKinds) {
    MacroConfig cfg = c.macro;
    cfg.kind = kind;
    cfg.adc_bits = 9;
    cfg.weight_bits = 8;
    cfg.set_vth_sigma(0.0);
    cfg.set_leakage(false);
    const std::uint64_t seed = rng::derive(c.macro.seed, 0x0e0);

    EquivCount a, b;
    IntMatrix w(rows, banks, 8);
    std::vector<int> x(rows);
    for (long m = 0; m < part_a; ++m) {
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t col = 0; col < banks; ++col) {
          // first matrix enumerates all 256 weights
          w.at(r, col) = m == 0 ? static_cast<int>((r * banks + col) % 256) - 128
                                : random_in(seed, static_cast<std::uint64_t>(m), r * banks + col, -128, 127);
        }
        x[r] = random_in(seed, 1000000 + static_cast<std::uint64_t>(m), r, 0, 1);
      }
      const ProgrammedMacro macro = program_macro(w, cfg);
      compare(matvec(macro, x, 1), w, x, a);
      a.cases += fills_per_matvec;
    }
    for (int m = 0; m < c.experiment.matvecs; ++m) {
      const std::uint64_t s2 = rng::derive(seed, 0x200 + static_cast<std::uint64_t>(m));
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t col = 0; col < banks; ++col) w.at(r, col) = random_in(s2, 0, r * banks + col, -128, 127);
        x[r] = random_in(s2, 1, r, 0, (1 << in_bits) - 1);
      }
      const ProgrammedMacro macro = program_macro(w, cfg);
      compare(matvec(macro, x, in_bits), w, x, b);
      b.cases += static_cast<long>(banks);
    }
    csv << fmt::format("{},fills_1b,1,{},{},{},{},{}\n", to_string(kind), cfg.adc_bits, part_a, a.cases, a.mismatches,
                       a.max_error);
    csv << fmt::format("{},full_matvec,{},{},{},{},{},{}\n", to_string(kind), in_bits, cfg.adc_bits,
                       c.experiment.matvecs, b.cases, b.mismatches, b.max_error);
    const long total = a.mismatches + b.mismatches;
    o.summary.push_back(fmt::format("{}: {} mismatches ({} block fills, {} full matvecs)", to_string(kind), total,
                                    a.cases, c.experiment.matvecs));
    if (total != 0) o.violations.push_back(fmt::format("{}: {} mismatches against exact_dot", to_string(kind), total));
  }
  return o;
}

using Runner = Outcome (*)(const RunContext&);

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> r{
      {"fig3_example", fig3_example},   {"fig5_example", fig5_example},       {"fig6_hist", fig6_hist},
      {"fig8_transfer", fig8_transfer}, {"fig7_efficiency", fig7_efficiency}, {"fig9_accuracy", fig9_accuracy},
      {"fig10_breakdown", fig10_breakdown}, {"oracle_equiv", oracle_equiv}};
  return r;
}

}  // namespace

const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids{"fig3_example",    "fig5_example",  "fig6_hist",       "fig8_transfer",
                                            "fig7_efficiency", "fig9_accuracy", "fig10_breakdown", "oracle_equiv"};
  return ids;
}

bool is_experiment(const std::string& id) { return runners().contains(id); }

Outcome run_experiment(const std::string& id, const RunContext& ctx) {
  const auto it = runners().find(id);
  if (it == runners().end()) throw ConfigError("unknown experiment '" + id + "'");
  ctx.config.validate();
  return it->second(ctx);
}

std::filesystem::path model_path(const RunContext& ctx) {
  if (!ctx.config.nn.model.empty()) return ctx.config.nn.model;
  return ctx.data_dir / "digits" / fmt::format("model_w{}.json", ctx.config.nn.weight_bits);
}

std::filesystem::path dataset_path(const RunContext& ctx) {
  if (!ctx.config.nn.dataset.empty()) return ctx.config.nn.dataset;
  return ctx.data_dir / "digits" / "digits_test.csv";
}

void write_manifest(const std::string& id, const RunContext& ctx, const std::vector<std::string>& overrides,
                    const Outcome& outcome) {
  using nlohmann::json;
  json j;
  j["experiment"] = id;
  j["seed"] = ctx.config.macro.seed;
  j["config"] = json::parse(config_json(ctx.config));
  j["overrides"] = overrides;
  j["workers"] = ctx.workers;
  j["artifacts"] = outcome.files;
  j["summary"] = outcome.summary;
  j["violations"] = outcome.violations;
  j["status"] = outcome.violations.empty() ? "ok" : "invariant_violation";
  const auto now = std::chrono::system_clock::now();
  j["created_unix"] = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
  std::filesystem::create_directories(ctx.out_dir);
  std::ofstream os(ctx.out_dir / "manifest.json");
  if (!os) throw Error("cannot write manifest in " + ctx.out_dir.string());
  os << j.dump(2) << "\n";
}

}  // namespace fecim::tools

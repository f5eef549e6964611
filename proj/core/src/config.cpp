#include "fecim/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "fecim/errors.hpp"

namespace fecim {
namespace {

// Parsed state that is resolved only once the whole file is read.
struct Pending {
  SimConfig cfg;
  std::map<std::string, double> energy;  // explicit per-event constants override the calibration
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw ConfigError("expected a number, got '" + v + "'");
  return out;
}

long to_long(const std::string& v) {
  long out = 0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw ConfigError("expected an integer, got '" + v + "'");
  return out;
}

int to_int(const std::string& v) {
  const long x = to_long(v);
  if (x < -(1L << 30) || x > (1L << 30)) throw ConfigError("integer out of range: " + v);
  return static_cast<int>(x);
}

std::uint64_t to_u64(const std::string& v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) throw ConfigError("expected an unsigned integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "off" || v == "0" || v == "no") return false;
  throw ConfigError("expected a boolean, got '" + v + "'");
}

MacroKind to_kind(const std::string& v) {
  if (v == "curfe") return MacroKind::CurFe;
  if (v == "chgfe") return MacroKind::ChgFe;
  throw ConfigError("macro kind must be curfe or chgfe, got '" + v + "'");
}

using Setter = std::function<void(Pending&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto energy = [&t](const std::string& key) {
      t["energy." + key] = [key](Pending& p, const std::string& v) { p.energy[key] = to_double(v); };
    };
    t["macro.kind"] = [](Pending& p, const std::string& v) { p.cfg.macro.kind = to_kind(v); };
    t["macro.rows"] = [](Pending& p, const std::string& v) { p.cfg.macro.geometry.rows = to_int(v); };
    t["macro.cols"] = [](Pending& p, const std::string& v) { p.cfg.macro.geometry.cols = to_int(v); };
    t["macro.banks"] = [](Pending& p, const std::string& v) { p.cfg.macro.geometry.banks = to_int(v); };
    t["macro.rows_per_group"] = [](Pending& p, const std::string& v) {
      p.cfg.macro.geometry.rows_per_group = to_int(v);
    };
    t["macro.weight_bits"] = [](Pending& p, const std::string& v) { p.cfg.macro.weight_bits = to_int(v); };
    t["macro.seed"] = [](Pending& p, const std::string& v) { p.cfg.macro.seed = to_u64(v); };

    t["device.vdd_i"] = [](Pending& p, const std::string& v) { p.cfg.macro.device.curfe.supply_voltage = to_double(v); };
    t["device.vcm"] = [](Pending& p, const std::string& v) {
      p.cfg.macro.device.curfe.bias_voltage = to_double(v);
      p.cfg.macro.device.tia.bias_voltage = p.cfg.macro.device.curfe.bias_voltage;
    };
    t["device.ladder_base_resistance"] = [](Pending& p, const std::string& v) {
      p.cfg.macro.device.curfe.ladder_base_resistance = to_double(v);
    };
    t["device.channel_on_resistance"] = [](Pending& p, const std::string& v) {
      p.cfg.macro.device.curfe.channel_on_resistance = to_double(v);
    };
    t["device.channel_resistance_sensitivity"] = [](Pending& p, const std::string& v) {
      p.cfg.macro.device.curfe.channel_resistance_sensitivity = to_double(v);
    };
    t["device.vth_sigma"] = [](Pending& p, const std::string& v) { p.cfg.macro.set_vth_sigma(to_double(v)); };
    t["device.on_off_ratio"] = [](Pending& p, const std::string& v) {
      p.cfg.macro.device.curfe.on_off_ratio = to_double(v);
      p.cfg.macro.device.chgfe.on_off_ratio = p.cfg.macro.device.curfe.on_off_ratio;
    };
    t["device.leakage"] = [](Pending& p, const std::string& v) { p.cfg.macro.set_leakage(to_bool(v)); };
    t["device.transconductance"] = [](Pending& p, const std::string& v) {
      p.cfg.macro.device.chgfe.transconductance = to_double(v);
    };
    t["device.base_overdrive"] = [](Pending& p, const std::string& v) {
      p.cfg.macro.device.chgfe.base_overdrive = to_double(v);
    };

    t["tia.feedback_resistance"] = [](Pending& p, const std::string& v) {
      p.cfg.macro.device.tia.feedback_resistance = to_double(v);
    };

    t["chgfe.bl_capacitance"] = [](Pending& p, const std::string& v) {
      p.cfg.macro.device.chgfe_array.bl_capacitance = to_double(v);
    };
    t["chgfe.v_pre"] = [](Pending& p, const std::string& v) { p.cfg.macro.device.chgfe_array.v_pre = to_double(v); };
    t["chgfe.t_pre"] = [](Pending& p, const std::string& v) { p.cfg.macro.device.chgfe_array.t_pre = to_double(v); };
    t["chgfe.t_eval"] = [](Pending& p, const std::string& v) { p.cfg.macro.device.chgfe_array.t_eval = to_double(v); };
    t["chgfe.bl_supply"] = [](Pending& p, const std::string& v) {
      p.cfg.macro.device.chgfe_array.bl_supply = to_double(v);
    };

    t["adc.bits"] = [](Pending& p, const std::string& v) { p.cfg.macro.adc_bits = to_int(v); };

    energy("e_tia_per_eval");
    energy("mean_bl_swing");
    energy("e_adc_per_bit");
    energy("e_digital_per_accum");
    energy("e_driver_per_row");
    energy("calibration_scale");
    t["energy.curfe_tops_per_watt"] = [](Pending& p, const std::string& v) {
      p.cfg.calibration.curfe_tops_per_watt = to_double(v);
    };
    t["energy.chgfe_tops_per_watt"] = [](Pending& p, const std::string& v) {
      p.cfg.calibration.chgfe_tops_per_watt = to_double(v);
    };
    t["energy.digital_fraction"] = [](Pending& p, const std::string& v) {
      p.cfg.calibration.digital_fraction = to_double(v);
    };
    t["energy.driver_fraction"] = [](Pending& p, const std::string& v) {
      p.cfg.calibration.driver_fraction = to_double(v);
    };

    t["latency.t_eval"] = [](Pending& p, const std::string& v) { p.cfg.macro.latency.t_eval = to_double(v); };
    t["latency.t_share"] = [](Pending& p, const std::string& v) { p.cfg.macro.latency.t_share = to_double(v); };
    t["latency.t_sar_bit"] = [](Pending& p, const std::string& v) { p.cfg.macro.latency.t_sar_bit = to_double(v); };
    t["latency.t_digital"] = [](Pending& p, const std::string& v) { p.cfg.macro.latency.t_digital = to_double(v); };

    t["nn.model"] = [](Pending& p, const std::string& v) { p.cfg.nn.model = v; };
    t["nn.dataset"] = [](Pending& p, const std::string& v) { p.cfg.nn.dataset = v; };
    t["nn.adc_bits_min"] = [](Pending& p, const std::string& v) { p.cfg.nn.adc_bits_min = to_int(v); };
    t["nn.adc_bits_max"] = [](Pending& p, const std::string& v) { p.cfg.nn.adc_bits_max = to_int(v); };
    t["nn.seeds"] = [](Pending& p, const std::string& v) { p.cfg.nn.seeds = to_int(v); };
    t["nn.sigma"] = [](Pending& p, const std::string& v) { p.cfg.nn.sigma = to_double(v); };
    t["nn.weight_bits"] = [](Pending& p, const std::string& v) { p.cfg.nn.weight_bits = to_int(v); };

    t["experiment.trials"] = [](Pending& p, const std::string& v) { p.cfg.experiment.trials = to_int(v); };
    t["experiment.draws"] = [](Pending& p, const std::string& v) { p.cfg.experiment.draws = to_long(v); };
    t["experiment.matvecs"] = [](Pending& p, const std::string& v) { p.cfg.experiment.matvecs = to_int(v); };
    t["experiment.configs"] = [](Pending& p, const std::string& v) { p.cfg.experiment.configs = to_long(v); };
    t["experiment.input_bits"] = [](Pending& p, const std::string& v) { p.cfg.experiment.input_bits = to_int(v); };
    return t;
  }();
  return table;
}

void set_key(Pending& p, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError("unknown key '" + key + "'");
  it->second(p, value);
}

SimConfig resolve(Pending& p) {
  SimConfig cfg = p.cfg;
  cfg.calibration.adc_bits = 5;
  if (p.energy.contains("mean_bl_swing")) cfg.calibration.mean_bl_swing = p.energy["mean_bl_swing"];
  cfg.macro.energy = calibrate_energy(cfg.calibration, cfg.macro.device.chgfe_array);
  EnergyParams& e = cfg.macro.energy;
  for (const auto& [key, v] : p.energy) {
    if (key == "e_tia_per_eval") e.e_tia_per_eval = v;
    else if (key == "mean_bl_swing") e.mean_bl_swing = v;
    else if (key == "e_adc_per_bit") e.e_adc_per_bit = v;
    else if (key == "e_digital_per_accum") e.e_digital_per_accum = v;
    else if (key == "e_driver_per_row") e.e_driver_per_row = v;
    else if (key == "calibration_scale") e.calibration_scale = v;
  }
  return cfg;
}

void check(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

}  // namespace

void SimConfig::validate() const {
  macro.validate();
  check(calibration.curfe_tops_per_watt > 0.0 && calibration.chgfe_tops_per_watt > 0.0,
        "energy: efficiency anchors must be > 0");
  check(calibration.digital_fraction >= 0.0 && calibration.driver_fraction >= 0.0 &&
            calibration.digital_fraction + calibration.driver_fraction < 1.0,
        "energy: digital_fraction + driver_fraction must be in [0, 1)");
  check(experiment.trials >= 2, "experiment: trials must be >= 2");
  check(experiment.draws >= 2, "experiment: draws must be >= 2");
  check(experiment.matvecs >= 0 && experiment.configs >= 0, "experiment: matvecs and configs must be >= 0");
  check(experiment.input_bits >= 1 && experiment.input_bits <= 8, "experiment: input_bits must be in 1..8");
  check(nn.adc_bits_min >= 1 && nn.adc_bits_max <= 12 && nn.adc_bits_min <= nn.adc_bits_max,
        "nn: need 1 <= adc_bits_min <= adc_bits_max <= 12");
  check(nn.seeds >= 1, "nn: seeds must be >= 1");
  check(nn.sigma >= 0.0, "nn: sigma must be >= 0");
  check(nn.weight_bits == 4 || nn.weight_bits == 8, "nn: weight_bits must be 4 or 8");
}

SimConfig parse_config(std::istream& is, const std::string& source) {
  Pending p;
  std::set<std::string> seen;
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string where = fmt::format("{}:{}: ", source, lineno);
    const auto hash = line.find_first_of("#;");
    const std::string text = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ConfigError(where + "unterminated section header");
      section = trim(text.substr(1, text.size() - 2));
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    if (section.empty()) throw ConfigError(where + "key outside of any [section]");
    const std::string key = section + "." + trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError(where + "duplicate key '" + key + "'");
    try {
      set_key(p, key, value);
      resolve(p).validate();
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  return resolve(p);
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config " + path.string());
  return parse_config(is, path.string());
}

void apply_override(SimConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override must be section.key=value: " + assignment);
  // Round-trip through the parser so overrides get the same checks and calibration handling.
  const std::string key = trim(assignment.substr(0, eq));
  const auto dot = key.find('.');
  if (dot == std::string::npos) throw ConfigError("override key must be section.key: " + key);
  Pending p;
  p.cfg = cfg;
  const EnergyParams& e = cfg.macro.energy;
  const EnergyParams fresh = calibrate_energy(cfg.calibration, cfg.macro.device.chgfe_array);
  // Keep explicit energy constants from earlier layers.
  if (e.e_tia_per_eval != fresh.e_tia_per_eval) p.energy["e_tia_per_eval"] = e.e_tia_per_eval;
  if (e.mean_bl_swing != fresh.mean_bl_swing) p.energy["mean_bl_swing"] = e.mean_bl_swing;
  if (e.e_adc_per_bit != fresh.e_adc_per_bit) p.energy["e_adc_per_bit"] = e.e_adc_per_bit;
  if (e.e_digital_per_accum != fresh.e_digital_per_accum) p.energy["e_digital_per_accum"] = e.e_digital_per_accum;
  if (e.e_driver_per_row != fresh.e_driver_per_row) p.energy["e_driver_per_row"] = e.e_driver_per_row;
  if (e.calibration_scale != fresh.calibration_scale) p.energy["calibration_scale"] = e.calibration_scale;
  try {
    set_key(p, key, trim(assignment.substr(eq + 1)));
    SimConfig out = resolve(p);
    out.validate();
    cfg = out;
  } catch (const ConfigError& ex) {
    throw ConfigError("--override " + assignment + ": " + ex.what());
  }
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : setters()) keys.push_back(k);
  return keys;
}

std::string config_json(const SimConfig& c) {
  using nlohmann::json;
  const MacroConfig& m = c.macro;
  json j;
  j["macro"] = {{"kind", to_string(m.kind)},
                {"rows", m.geometry.rows},
                {"cols", m.geometry.cols},
                {"banks", m.geometry.banks},
                {"rows_per_group", m.geometry.rows_per_group},
                {"weight_bits", m.weight_bits},
                {"seed", m.seed}};
  j["device"] = {{"vdd_i", m.device.curfe.supply_voltage},
                 {"vcm", m.device.curfe.bias_voltage},
                 {"ladder_base_resistance", m.device.curfe.ladder_base_resistance},
                 {"channel_on_resistance", m.device.curfe.channel_on_resistance},
                 {"channel_resistance_sensitivity", m.device.curfe.channel_resistance_sensitivity},
                 {"vth_sigma", m.vth_sigma()},
                 {"on_off_ratio", m.device.curfe.on_off_ratio},
                 {"leakage", m.device.curfe.leakage},
                 {"transconductance", m.device.chgfe.transconductance},
                 {"base_overdrive", m.device.chgfe.base_overdrive}};
  j["tia"] = {{"feedback_resistance", m.device.tia.feedback_resistance}};
  const ChgfeParams& a = m.device.chgfe_array;
  j["chgfe"] = {{"bl_capacitance", a.bl_capacitance},
                {"v_pre", a.v_pre},
                {"t_pre", a.t_pre},
                {"t_eval", a.t_eval},
                {"bl_supply", a.bl_supply}};
  j["adc"] = {{"bits", m.adc_bits}};
  j["energy"] = {{"e_tia_per_eval", m.energy.e_tia_per_eval},
                 {"mean_bl_swing", m.energy.mean_bl_swing},
                 {"e_adc_per_bit", m.energy.e_adc_per_bit},
                 {"e_digital_per_accum", m.energy.e_digital_per_accum},
                 {"e_driver_per_row", m.energy.e_driver_per_row},
                 {"calibration_scale", m.energy.calibration_scale},
                 {"curfe_tops_per_watt", c.calibration.curfe_tops_per_watt},
                 {"chgfe_tops_per_watt", c.calibration.chgfe_tops_per_watt},
                 {"digital_fraction", c.calibration.digital_fraction},
                 {"driver_fraction", c.calibration.driver_fraction}};
  j["latency"] = {{"t_eval", m.latency.t_eval},
                  {"t_share", m.latency.t_share},
                  {"t_sar_bit", m.latency.t_sar_bit},
                  {"t_digital", m.latency.t_digital}};
  j["nn"] = {{"model", c.nn.model},
             {"dataset", c.nn.dataset},
             {"adc_bits_min", c.nn.adc_bits_min},
             {"adc_bits_max", c.nn.adc_bits_max},
             {"seeds", c.nn.seeds},
             {"sigma", c.nn.sigma},
             {"weight_bits", c.nn.weight_bits}};
  j["experiment"] = {{"trials", c.experiment.trials},
                     {"draws", c.experiment.draws},
                     {"matvecs", c.experiment.matvecs},
                     {"configs", c.experiment.configs},
                     {"input_bits", c.experiment.input_bits}};
  return j.dump(2);
}

}  // namespace fecim

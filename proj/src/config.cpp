#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "bolab/cli.hpp"

namespace bolab::cli {

using nlohmann::json;

namespace {

const std::set<std::string> kSimKeys = {
    "epsilon",        "n_points",       "length",        "t_final",        "dt",
    "cfl",            "initial_condition", "coefficients", "lump_amplitude", "lump_width",
    "dealias",        "snapshot_stride", "forcing",      "nonlinear"};
const std::set<std::string> kSweepKeys = {"epsilons", "reference", "error_times"};
const std::set<std::string> kMmsKeys = {"order_dts"};

double get_number(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_number()) throw ConfigError(key, "must be a number");
  return v.get<double>();
}

Index get_integer(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_number_integer()) throw ConfigError(key, "must be an integer");
  return v.get<Index>();
}

bool get_bool(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_boolean()) throw ConfigError(key, "must be true or false");
  return v.get<bool>();
}

std::vector<double> get_number_list(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_array()) throw ConfigError(key, "must be an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(key, "must be an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

void check_keys(const json& doc, Schema schema) {
  if (!doc.is_object()) throw ConfigError("config", "top level must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (kSimKeys.count(key)) continue;
    if (schema == Schema::sweep && kSweepKeys.count(key)) continue;
    if (schema == Schema::mms && kMmsKeys.count(key)) continue;
    throw ConfigError(key, "unknown key");
  }
}

const char* preset_name(Preset p) {
  switch (p) {
    case Preset::cosine: return "cosine";
    case Preset::two_mode: return "two-mode";
    case Preset::lump: return "lump";
  }
  return "cosine";
}

}  // namespace

json load_config_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("malformed JSON: ") + e.what());
  }
  if (doc.is_object() && doc.contains("tool_version") && doc.contains("config"))
    return doc.at("config");
  return doc;
}

SimConfig parse_sim_config(const json& doc, Schema schema) {
  check_keys(doc, schema);
  SimConfig cfg;
  if (doc.contains("epsilon")) cfg.epsilon = get_number(doc, "epsilon");
  if (doc.contains("n_points")) cfg.n_points = get_integer(doc, "n_points");
  if (doc.contains("length")) cfg.length = get_number(doc, "length");
  if (doc.contains("t_final")) cfg.t_final = get_number(doc, "t_final");
  if (doc.contains("dt")) cfg.dt = get_number(doc, "dt");
  if (doc.contains("cfl")) cfg.cfl = get_number(doc, "cfl");
  if (doc.contains("dealias")) cfg.dealias = get_bool(doc, "dealias");
  if (doc.contains("nonlinear")) cfg.nonlinear = get_bool(doc, "nonlinear");
  if (doc.contains("snapshot_stride")) cfg.snapshot_stride = get_integer(doc, "snapshot_stride");
  if (doc.contains("lump_amplitude"))
    cfg.initial_condition.lump_amplitude = get_number(doc, "lump_amplitude");
  if (doc.contains("lump_width")) cfg.initial_condition.lump_width = get_number(doc, "lump_width");

  std::string ic = "cosine";
  if (doc.contains("initial_condition")) {
    if (!doc.at("initial_condition").is_string())
      throw ConfigError("initial_condition", "must be a string");
    ic = doc.at("initial_condition").get<std::string>();
  }
  if (ic == "cosine") {
    cfg.initial_condition.data = Preset::cosine;
  } else if (ic == "two-mode") {
    cfg.initial_condition.data = Preset::two_mode;
  } else if (ic == "lump") {
    cfg.initial_condition.data = Preset::lump;
  } else if (ic == "coefficients") {
    if (!doc.contains("coefficients"))
      throw ConfigError("coefficients", "required when initial_condition is \"coefficients\"");
    const json& list = doc.at("coefficients");
    if (!list.is_array()) throw ConfigError("coefficients", "must be an array of [j, re, im]");
    std::vector<ModeCoefficient> modes;
    for (const auto& e : list) {
      if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number() ||
          !e[2].is_number())
        throw ConfigError("coefficients", "entries must be [j, re, im] with integer j");
      modes.push_back({e[0].get<Index>(), {e[1].get<double>(), e[2].get<double>()}});
    }
    cfg.initial_condition.data = std::move(modes);
  } else {
    throw ConfigError("initial_condition", "unknown preset \"" + ic + "\"");
  }
  if (ic != "coefficients" && doc.contains("coefficients"))
    throw ConfigError("coefficients", "only valid with initial_condition \"coefficients\"");

  if (doc.contains("forcing") && !doc.at("forcing").is_null()) {
    if (!doc.at("forcing").is_string()) throw ConfigError("forcing", "must be a string or null");
    const auto tag = doc.at("forcing").get<std::string>();
    if (tag == "none")
      cfg.forcing = Forcing::none;
    else if (tag == "traveling-sine")
      cfg.forcing = Forcing::traveling_sine;
    else
      throw ConfigError("forcing", "unknown manufactured solution \"" + tag + "\"");
  }

  if (schema == Schema::sweep) {
    SimConfig probe = cfg;
    probe.epsilon = 0;
    validate(probe);
  } else {
    validate(cfg);
  }
  return cfg;
}

SweepConfig parse_sweep_config(const json& doc) {
  SweepConfig cfg;
  cfg.base = parse_sim_config(doc, Schema::sweep);
  if (doc.contains("epsilons")) cfg.epsilons = get_number_list(doc, "epsilons");
  if (doc.contains("error_times")) cfg.error_times = get_number_list(doc, "error_times");
  if (doc.contains("reference")) {
    if (!doc.at("reference").is_string()) throw ConfigError("reference", "must be a string");
    const auto mode = doc.at("reference").get<std::string>();
    if (mode == "bo_same_resolution")
      cfg.reference = ReferenceMode::same_resolution;
    else if (mode == "bo_refined")
      cfg.reference = ReferenceMode::refined;
    else
      throw ConfigError("reference", "must be \"bo_same_resolution\" or \"bo_refined\"");
  }
  validate(cfg);
  return cfg;
}

json to_json(const SimConfig& cfg) {
  json doc;
  doc["epsilon"] = cfg.epsilon;
  doc["n_points"] = cfg.n_points;
  doc["length"] = cfg.length;
  doc["t_final"] = cfg.t_final;
  if (cfg.dt)
    doc["dt"] = *cfg.dt;
  else
    doc["cfl"] = cfg.cfl.value_or(kDefaultCfl);
  const auto& ic = cfg.initial_condition;
  if (const auto* modes = std::get_if<std::vector<ModeCoefficient>>(&ic.data)) {
    doc["initial_condition"] = "coefficients";
    json list = json::array();
    for (const auto& m : *modes) list.push_back({m.mode, m.value.real(), m.value.imag()});
    doc["coefficients"] = list;
  } else {
    doc["initial_condition"] = preset_name(std::get<Preset>(ic.data));
  }
  doc["lump_amplitude"] = ic.lump_amplitude;
  doc["lump_width"] = ic.lump_width;
  doc["dealias"] = cfg.dealias;
  doc["nonlinear"] = cfg.nonlinear;
  doc["snapshot_stride"] = cfg.snapshot_stride;
  doc["forcing"] = cfg.forcing == Forcing::traveling_sine ? "traveling-sine" : "none";
  return doc;
}

json to_json(const SweepConfig& cfg) {
  json doc = to_json(cfg.base);
  doc["epsilons"] = cfg.epsilons;
  doc["reference"] =
      cfg.reference == ReferenceMode::refined ? "bo_refined" : "bo_same_resolution";
  doc["error_times"] = cfg.error_times;
  return doc;
}

std::string config_hash(const json& resolved) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : resolved.dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace bolab::cli

#include "phasecover/config.hpp"

#include <cmath>
#include <set>

#include "json.hpp"
#include "phasecover/spaces.hpp"

namespace phasecover {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!ok.count(it.key()))
      throw ValidationError(path + "." + it.key() + ": unknown field");
  }
}

const json& require_field(const json& j, const std::string& path, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(path + "." + key + ": missing required field");
  return *it;
}

double parse_exponent(const json& j, const std::string& path) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return kInf;
    throw ValidationError(path + ": exponent must be a number or \"inf\"");
  }
  double p = j.get<double>();
  if (!(p >= 1.0)) throw ValidationError(path + ": exponent outside [1, inf]");
  return p;
}

WeightSpec parse_weight(const json& j, const std::string& path) {
  reject_unknown(j, path, {"family", "alpha", "base"});
  WeightSpec w;
  w.family = require_field(j, path, "family").get<std::string>();
  if (w.family == "one") {
  } else if (w.family == "polynomial") {
    w.alpha = require_field(j, path, "alpha").get<double>();
  } else if (w.family == "exponential") {
    w.base = require_field(j, path, "base").get<double>();
    if (w.base <= 0) throw ValidationError(path + ".base: must be positive");
  } else {
    throw ValidationError(path + ".family: unknown value '" + w.family + "'");
  }
  return w;
}

MaskSpec parse_mask(const json& j, const std::string& path) {
  reject_unknown(j, path, {"family", "value", "offset", "amplitude", "axis", "position"});
  MaskSpec m;
  m.present = true;
  m.family = require_field(j, path, "family").get<std::string>();
  if (m.family == "constant") {
    m.value = j.value("value", 1.0);
  } else if (m.family == "half_plane") {
    m.axis = j.value("axis", 0);
  } else if (m.family == "cosine") {
    m.offset = j.value("offset", 0.6);
    m.amplitude = j.value("amplitude", 0.3);
    m.axis = j.value("axis", 0);
  } else if (m.family == "sign_split") {
    m.position = j.value("position", std::int64_t{1});
  } else {
    throw ValidationError(path + ".family: unknown value '" + m.family + "'");
  }
  return m;
}

}  // namespace

namespace {

ExperimentConfig parse_config_impl(const json& j);

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: invalid JSON: ") + e.what());
  }
  try {
    return parse_config_impl(j);
  } catch (const ValidationError&) {
    throw;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
}

namespace {

ExperimentConfig parse_config_impl(const json& j) {
  reject_unknown(j, "config",
                 {"carrier", "weight", "spaces", "system", "partition", "exhaustion",
                  "trials", "seed"});
  ExperimentConfig cfg;

  const json& jc = require_field(j, "config", "carrier");
  reject_unknown(jc, "config.carrier", {"kind", "dim", "modulus", "v_radius"});
  cfg.carrier.kind = require_field(jc, "config.carrier", "kind").get<std::string>();
  if (cfg.carrier.kind != "cyclic" && cfg.carrier.kind != "lattice")
    throw ValidationError("config.carrier.kind: unknown value '" + cfg.carrier.kind + "'");
  cfg.carrier.dim = require_field(jc, "config.carrier", "dim").get<int>();
  if (cfg.carrier.dim < 1 || cfg.carrier.dim > 4)
    throw ValidationError("config.carrier.dim: out of range [1,4]");
  if (cfg.carrier.kind == "cyclic") {
    cfg.carrier.modulus = require_field(jc, "config.carrier", "modulus").get<std::int64_t>();
    if (cfg.carrier.modulus < 1) throw ValidationError("config.carrier.modulus: must be positive");
  }
  cfg.carrier.v_radius = jc.value("v_radius", std::int64_t{1});
  if (cfg.carrier.v_radius < 0) throw ValidationError("config.carrier.v_radius: must be nonnegative");

  cfg.weight = parse_weight(require_field(j, "config", "weight"), "config.weight");

  const json& js = require_field(j, "config", "spaces");
  if (!js.is_array() || js.empty())
    throw ValidationError("config.spaces: must be a nonempty array");
  for (std::size_t i = 0; i < js.size(); ++i) {
    std::string path = "config.spaces[" + std::to_string(i) + "]";
    const json& s = js[i];
    reject_unknown(s, path, {"p", "q", "split", "weight"});
    SpaceSpec sp;
    sp.p = parse_exponent(require_field(s, path, "p"), path + ".p");
    if (s.contains("q")) sp.q = parse_exponent(s["q"], path + ".q");
    sp.split = s.value("split", 0);
    if (sp.split < 0 || sp.split >= cfg.carrier.dim)
      throw ValidationError(path + ".split: must leave inner and outer blocks nonempty");
    if (sp.split > 0 && !s.contains("q"))
      throw ValidationError(path + ".q: required when split > 0");
    if (s.contains("weight")) sp.weight = parse_weight(s["weight"], path + ".weight");
    cfg.spaces.push_back(sp);
  }

  const json& jy = require_field(j, "config", "system");
  reject_unknown(jy, "config.system",
                 {"type", "n", "a", "b", "window", "radius", "decay", "amplitude",
                  "gen_seed", "block"});
  cfg.system.type = require_field(jy, "config.system", "type").get<std::string>();
  if (cfg.system.type == "gabor") {
    cfg.system.n = require_field(jy, "config.system", "n").get<std::int64_t>();
    cfg.system.a = jy.value("a", std::int64_t{0});
    cfg.system.b = jy.value("b", std::int64_t{0});
    if (jy.contains("window")) {
      const json& jw = jy["window"];
      reject_unknown(jw, "config.system.window", {"family", "sigma"});
      cfg.system.window.family = jw.value("family", std::string("gaussian"));
      if (cfg.system.window.family != "gaussian")
        throw ValidationError("config.system.window.family: unknown value '" +
                              cfg.system.window.family + "'");
      cfg.system.window.sigma = jw.value("sigma", 1.0);
      if (cfg.system.window.sigma <= 0)
        throw ValidationError("config.system.window.sigma: must be positive");
    }
  } else if (cfg.system.type == "localized-frame") {
    cfg.system.radius = require_field(jy, "config.system", "radius").get<std::int64_t>();
    cfg.system.decay = jy.value("decay", 0.5);
    cfg.system.amplitude = jy.value("amplitude", 0.25);
    cfg.system.gen_seed = jy.value("gen_seed", std::uint64_t{7});
  } else if (cfg.system.type == "block") {
    cfg.system.n = require_field(jy, "config.system", "n").get<std::int64_t>();
    cfg.system.block = require_field(jy, "config.system", "block").get<std::int64_t>();
  } else if (cfg.system.type == "delta") {
  } else {
    throw ValidationError("config.system.type: unknown value '" + cfg.system.type + "'");
  }

  const json& jp = require_field(j, "config", "partition");
  reject_unknown(jp, "config.partition", {"profile", "step", "width", "mask"});
  cfg.partition.profile = require_field(jp, "config.partition", "profile").get<std::string>();
  if (cfg.partition.profile != "triangular" && cfg.partition.profile != "raised_cosine" &&
      cfg.partition.profile != "gaussian_normalized")
    throw ValidationError("config.partition.profile: unknown value '" + cfg.partition.profile + "'");
  cfg.partition.step =
      require_field(jp, "config.partition", "step").get<std::vector<std::int64_t>>();
  if (cfg.partition.step.empty() ||
      cfg.partition.step.size() != static_cast<std::size_t>(cfg.carrier.dim))
    throw ValidationError("config.partition.step: needs one entry per carrier dimension");
  for (std::int64_t s : cfg.partition.step) {
    if (s < 1) throw ValidationError("config.partition.step: entries must be positive");
  }
  cfg.partition.width = require_field(jp, "config.partition", "width").get<double>();
  if (cfg.partition.width <= 0) throw ValidationError("config.partition.width: must be positive");
  if (jp.contains("mask")) cfg.partition.mask = parse_mask(jp["mask"], "config.partition.mask");

  const json& je = require_field(j, "config", "exhaustion");
  reject_unknown(je, "config.exhaustion", {"initial_radius", "doublings"});
  cfg.exhaustion.initial_radius =
      require_field(je, "config.exhaustion", "initial_radius").get<std::int64_t>();
  if (cfg.exhaustion.initial_radius < 1)
    throw ValidationError("config.exhaustion.initial_radius: must be positive");
  cfg.exhaustion.doublings = je.value("doublings", 3);
  if (cfg.exhaustion.doublings < 0 || cfg.exhaustion.doublings > 16)
    throw ValidationError("config.exhaustion.doublings: out of range [0,16]");

  cfg.trials = require_field(j, "config", "trials").get<int>();
  if (cfg.trials < 1) throw ValidationError("config.trials: must be positive");
  if (!j.contains("seed")) throw ValidationError("config.seed: missing required field");
  cfg.seed = j["seed"].get<std::uint64_t>();

  cfg.canonical_text = j.dump();
  return cfg;
}

}  // namespace

std::string config_hash_hex(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : cfg.canonical_text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace phasecover

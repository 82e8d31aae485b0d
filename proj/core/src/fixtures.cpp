#include <array>
#include <utility>

#include "phasecover/experiment.hpp"

namespace phasecover {

namespace {

constexpr const char* kGabor16 = R"json({
  "carrier": {"kind": "cyclic", "dim": 2, "modulus": 16, "v_radius": 1},
  "weight": {"family": "one"},
  "spaces": [{"p": 1}, {"p": 2}, {"p": "inf"}],
  "system": {"type": "gabor", "n": 16, "a": 2, "b": 2, "window": {"family": "gaussian", "sigma": 1.0}},
  "partition": {"profile": "raised_cosine", "step": [4, 4], "width": 8},
  "exhaustion": {"initial_radius": 2, "doublings": 2},
  "trials": 100,
  "seed": 24301
})json";

constexpr const char* kGabor32 = R"json({
  "carrier": {"kind": "cyclic", "dim": 2, "modulus": 32, "v_radius": 1},
  "weight": {"family": "one"},
  "spaces": [{"p": 2}],
  "system": {"type": "gabor", "n": 32, "a": 4, "b": 4, "window": {"family": "gaussian", "sigma": 1.0}},
  "partition": {"profile": "raised_cosine", "step": [4, 4], "width": 8, "mask": {"family": "half_plane"}},
  "exhaustion": {"initial_radius": 2, "doublings": 3},
  "trials": 100,
  "seed": 24301
})json";

constexpr const char* kBlock8 = R"json({
  "carrier": {"kind": "cyclic", "dim": 1, "modulus": 8, "v_radius": 1},
  "weight": {"family": "one"},
  "spaces": [{"p": 2}],
  "system": {"type": "block", "n": 8, "block": 2},
  "partition": {"profile": "raised_cosine", "step": [2], "width": 4, "mask": {"family": "sign_split", "position": 1}},
  "exhaustion": {"initial_radius": 2, "doublings": 1},
  "trials": 50,
  "seed": 24301
})json";

constexpr const char* kLocFrame33 = R"json({
  "carrier": {"kind": "lattice", "dim": 1, "v_radius": 1},
  "weight": {"family": "polynomial", "alpha": 1.0},
  "spaces": [{"p": 2}],
  "system": {"type": "localized-frame", "radius": 16, "decay": 0.5, "amplitude": 0.2, "gen_seed": 7},
  "partition": {"profile": "triangular", "step": [4], "width": 8},
  "exhaustion": {"initial_radius": 4, "doublings": 3},
  "trials": 50,
  "seed": 24301
})json";

constexpr std::array<std::pair<const char*, const char*>, 4> kFixtures = {{
    {"gabor16.json", kGabor16},
    {"gabor32.json", kGabor32},
    {"block8.json", kBlock8},
    {"locframe33.json", kLocFrame33},
}};

}  // namespace

std::vector<std::string> fixture_names() {
  std::vector<std::string> names;
  names.reserve(kFixtures.size());
  for (const auto& [name, text] : kFixtures) names.emplace_back(name);
  return names;
}

std::string fixture_json(const std::string& name) {
  for (const auto& [fname, text] : kFixtures) {
    if (name == fname) return text;
  }
  throw ValidationError("unknown fixture '" + name + "'");
}

}  // namespace phasecover

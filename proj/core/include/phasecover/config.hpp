#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phasecover/errors.hpp"

namespace phasecover {

struct CarrierSpec {
  std::string kind = "cyclic";  // cyclic | lattice
  int dim = 1;
  std::int64_t modulus = 16;  // cyclic only
  std::int64_t v_radius = 1;
};

struct WeightSpec {
  std::string family = "one";  // one | polynomial | exponential
  double alpha = 0;
  double base = 2;
};

struct SpaceSpec {
  double p = 2;
  double q = 0;  // 0 = plain l^p
  int split = 0;
  WeightSpec weight;  // the space weight v
};

struct WindowSpec {
  std::string family = "gaussian";
  double sigma = 1.0;
};

struct SystemSpec {
  std::string type = "gabor";  // gabor | localized-frame | delta | block
  // gabor
  std::int64_t n = 16;
  std::int64_t a = 0;  // 0 = default lattice
  std::int64_t b = 0;
  WindowSpec window;
  // localized-frame
  std::int64_t radius = 16;
  double decay = 0.5;
  double amplitude = 0.25;
  std::uint64_t gen_seed = 7;
  // block
  std::int64_t block = 2;
};

struct MaskSpec {
  bool present = false;
  std::string family = "constant";  // constant | half_plane | cosine | sign_split
  double value = 1.0;
  double offset = 0.6;
  double amplitude = 0.3;
  int axis = 0;
  std::int64_t position = 1;
};

struct PartitionSpec {
  std::string profile = "raised_cosine";  // triangular | raised_cosine | gaussian_normalized
  std::vector<std::int64_t> step;         // per-dimension center step
  double width = 8;
  MaskSpec mask;
};

struct ExhaustionSpec {
  std::int64_t initial_radius = 2;
  int doublings = 3;
};

struct ExperimentConfig {
  CarrierSpec carrier;
  WeightSpec weight;
  std::vector<SpaceSpec> spaces;
  SystemSpec system;
  PartitionSpec partition;
  ExhaustionSpec exhaustion;
  int trials = 100;
  std::uint64_t seed = 0x5EED;
  std::string canonical_text;  // canonicalized JSON, input to the hash
};

/// Parses and validates a config document. Unknown fields are rejected with
/// their full path; so are missing required fields and empty space lists.
ExperimentConfig parse_config(const std::string& json_text);

/// FNV-1a of the canonical config text, as 16 hex digits.
std::string config_hash_hex(const ExperimentConfig& cfg);

}  // namespace phasecover

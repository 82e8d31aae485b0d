#pragma once

#include <string>

#include "phasecover/gabor.hpp"
#include "phasecover/localized.hpp"

namespace phasecover {

/// Molecule systems as JSON: carrier, nodes, sparse (index, re, im) triples
/// per atom and dual atom, and the envelope.
std::string molecule_to_json(const MoleculeSystem& sys);
MoleculeSystem molecule_from_json(const std::string& text);

/// Partitions as JSON: centers plus sparse member functions.
std::string partition_to_json(const PartitionOfUnity& pu);
PartitionOfUnity partition_from_json(const std::string& text);

/// Masks from JSON: either {"family": ...} (constant, half_plane, cosine,
/// sign_split) or {"grid": [[coords, re, im], ...]}. The mask is analyzed
/// over the given window.
SymbolMask mask_from_json(const std::string& text, const Group& g,
                          std::span<const Elem> window);

/// Named symbol families used by configs and fixtures.
GFunc constant_mask(const Group& g, std::span<const Elem> window, double value);
GFunc half_plane_mask(const Group& g, std::span<const Elem> window, int axis = 0);
GFunc cosine_mask(const Group& g, std::span<const Elem> window, double offset,
                  double amplitude, int axis = 0);
/// +1 everywhere except -1 at the given position (the sign-split obstruction).
GFunc sign_split_mask(const Group& g, std::span<const Elem> window, const Elem& position);

/// Signals and windows on disk: an 8-byte little-endian length header
/// followed by interleaved (re, im) float64 samples.
void write_signal(const std::string& path, const Eigen::VectorXcd& x);
Eigen::VectorXcd read_signal(const std::string& path);

struct SignalSidecar {
  std::int64_t n = 0;
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::string window_family = "gaussian";
};

void write_signal_sidecar(const std::string& path, const SignalSidecar& meta);
SignalSidecar read_signal_sidecar(const std::string& path);

}  // namespace phasecover

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "phasecover/partition.hpp"

namespace phasecover {

/// Bounded symbol on the working window. Analysis of the stored values
/// determines whether the mask is real and whether it is pinched between
/// positive bounds (required for inversion).
struct SymbolMask {
  GFunc m;
  bool real = false;
  bool positive_bounded = false;
  double lower = 0;
  double upper = 0;

  /// Inspects the values on the given window (points absent from m count as
  /// zero there, which voids positivity).
  static SymbolMask analyze(GFunc m, std::span<const Elem> window);
};

/// M_m(f) = P(m f); callers pass f already in the atomic span.
GFunc phase_multiplier(const MoleculeSystem& sys, const SymbolMask& mask, const GFunc& f);

/// The windowed approximant P(P_U(m f)); requires an exact partition.
GFunc windowed_phase_multiplier(const MoleculeSystem& sys, const PartitionOfUnity& pu,
                                const SymbolMask& mask, const CoverWindow& u,
                                const GFunc& f);

/// The same operators written on the orthonormal span basis.
Eigen::MatrixXcd phase_multiplier_matrix(const MoleculeSystem& sys, const SymbolMask& mask);
Eigen::MatrixXcd windowed_phase_multiplier_matrix(const MoleculeSystem& sys,
                                                  const PartitionOfUnity& pu,
                                                  const SymbolMask& mask,
                                                  const CoverWindow& u);

/// Node sets feeding the convolution-dominated algebra must be (a window of)
/// a subgroup: closed under products and inverses that stay inside the
/// bounding box, and containing the identity. Throws otherwise.
void require_subgroup_window(const RelSepSet& nodes);

struct CdNorm {
  double norm = 0;
  // The optimal dominating sequence: per-diagonal suprema indexed by the
  // group difference.
  std::map<Elem, double> dominating;
};

/// Convolution-dominated norm of a matrix over the nodes. side == right
/// dominates |T_{l,l'}| by a(l'^{-1} l), side == left by a(l l'^{-1}); the
/// infimum over dominating sequences is attained at the per-diagonal max and
/// the norm is its weighted l^1 mass.
CdNorm cd_norm(const Eigen::MatrixXcd& t, const RelSepSet& nodes, const Weight& w,
               Side side);

struct GramMatrix {
  RelSepSet nodes;
  Eigen::MatrixXcd l;     // <m phi_{l'}, phi_l>
  Eigen::MatrixXcd pinv;  // Moore-Penrose, singular values below 1e-12 sigma_max dropped
  int rank = 0;
  double sigma_max = 0;
  double spectral_gap = 0;  // smallest retained singular value
  CdNorm cd;
};

GramMatrix gram_matrix(const MoleculeSystem& sys, const SymbolMask& mask, const Weight& w);

/// Inverse multiplier synthesis . pinv(gram) . adjoint-analysis. Refuses
/// masks that are not real with positive bounds: a sign-changing symbol can
/// annihilate an atom and the composed operator loses its inverse.
GFunc inverse_phase_multiplier(const MoleculeSystem& sys, const GramMatrix& gram,
                               const SymbolMask& mask, const GFunc& f);
Eigen::MatrixXcd inverse_phase_multiplier_matrix(const MoleculeSystem& sys,
                                                 const GramMatrix& gram,
                                                 const SymbolMask& mask);

struct EquivalenceRow {
  std::string space;
  double p = 0;
  double q = 0;
  std::string weight;
  int trial_count = 0;
  double c_min = 0;
  double c_max = 0;
  std::vector<double> ratios;  // per-trial, zero trials skipped

  double spread() const { return c_min > 0 ? c_max / c_min : kInf; }
};

/// Measures the two sides of the cover characterization on random span
/// vectors: for each environment space E the ratio
///   | (|P(f eta_c)|_B)_c |_{E_d} / |f|_E
/// is collected over trials (theta_c = mask * eta_c when a mask is given;
/// that route requires a positive-bounded mask, subgroup nodes and canonical
/// duals). Trial vectors are complex gaussian coefficients pushed through
/// synthesis.
std::vector<EquivalenceRow> norm_equivalence_report(
    const MoleculeSystem& sys, const PartitionOfUnity& pu,
    std::span<const SolidSpaceSpec> environments, const SolidSpaceSpec& b,
    const SymbolMask* theta_mask, int trials, std::uint64_t seed, const Neighborhood& v);

}  // namespace phasecover

#pragma once

#include <span>
#include <vector>

#include "phasecover/molecules.hpp"

namespace phasecover {

/// A family of bump functions attached to centers, together with the shared
/// envelope and the bounds of the pointwise sum over the working window.
/// exact_partition means the sum is identically one there (up to 1e-12).
struct PartitionOfUnity {
  Group group;
  RelSepSet centers;
  std::vector<GFunc> functions;
  GFunc envelope;
  double sum_lower = 0;
  double sum_upper = 0;
  bool exact_partition = false;
  std::vector<Elem> window;
};

enum class BupuProfile { triangular, raised_cosine, gaussian_normalized };

/// Normalized bump partition: eta_c = (profile at c) / (sum of all shifted
/// profiles). Throws when the profiles fail to cover the window, naming the
/// first uncovered point. The envelope is the exhaustive pointwise max of the
/// recentered members.
PartitionOfUnity build_bupu(const Group& g, std::vector<Elem> centers, BupuProfile profile,
                            double width, const Neighborhood& v,
                            std::vector<Elem> window = {});

/// theta_c = mask * eta_c. The mask must be real-valued on the window; the
/// sum bounds are recomputed and exact_partition is dropped.
PartitionOfUnity scaled_partition(const PartitionOfUnity& pu, const GFunc& mask);

/// Centered box window {-r..r}^d used to localize reassembled pieces; the
/// exhaustion of the carrier runs over doubling radii.
struct CoverWindow {
  Group group;
  std::int64_t radius = 0;

  bool contains(const Elem& x) const {
    Elem r = group.min_residue(x);
    for (int i = 0; i < group.dim(); ++i) {
      if (r.c[i] > radius || r.c[i] < -radius) return false;
    }
    return true;
  }
  bool covers_group() const {
    return group.kind() == Group::Kind::cyclic && 2 * radius + 1 >= group.modulus();
  }
};

/// Localized analysis: one projected piece P(f * eta_c) per center.
VectorCoeffs vector_analysis(const MoleculeSystem& sys, const PartitionOfUnity& pu,
                             const GFunc& f);

/// Localized synthesis: sum_c P(F_c) * chi_{c U}.
GFunc vector_synthesis(const MoleculeSystem& sys, const PartitionOfUnity& pu,
                       const VectorCoeffs& f, const CoverWindow& u);

/// The approximate projector: exactly the composition of vector_synthesis
/// after vector_analysis (same summation order). Requires an exact partition.
GFunc approx_projector(const MoleculeSystem& sys, const PartitionOfUnity& pu,
                       const CoverWindow& u, const GFunc& f);

/// Same operator as a dense matrix on the system universe.
Eigen::MatrixXcd approx_projector_matrix(const MoleculeSystem& sys,
                                         const PartitionOfUnity& pu, const CoverWindow& u);

/// Worst-case mass of the smoothed partition envelope that lands outside the
/// translated cover windows:
///   G(x) = sup_y sum_c (g * chi_V)(c^{-1}y) [c^{-1}yx outside U].
/// Identically zero once U covers a finite carrier. Evaluated at the given
/// points (on cyclic carriers the overload without points uses the whole
/// carrier; on the lattice the function tends to a positive constant far out,
/// so an explicit evaluation set is required).
GFunc cover_leakage(const PartitionOfUnity& pu, const CoverWindow& u, const Neighborhood& v,
                    std::span<const Elem> eval_points);
GFunc cover_leakage(const PartitionOfUnity& pu, const CoverWindow& u, const Neighborhood& v);

struct CertificateRow {
  std::int64_t u_radius = 0;
  double empirical_opnorm = 0;  // max over probes of |Pf - P_U f|_E / |f|_{W(Linf,E)}
  double theory_bound = 0;      // weighted l^1 mass of (kernel)_# * leakage
};

struct CoverCertificate {
  std::vector<CertificateRow> rows;
  // Smallest radius whose proof-side bound certifies the given accuracy.
  std::vector<std::pair<double, std::int64_t>> certified;  // (eps, radius or -1)
};

/// Sweeps the cover exhaustion, pairing the probe-measured operator error
/// (a lower bound) with the proof-side dominating quantity (an upper bound up
/// to moderate constants). Probes are random complex gaussians plus every
/// atom; the reduction over probes is an index-ordered max, so results do not
/// depend on the thread count.
CoverCertificate projector_cover_certificate(
    const MoleculeSystem& sys, const PartitionOfUnity& pu, const KernelEnvelope& ke,
    const SolidSpaceSpec& e, const Weight& w, const Neighborhood& v,
    std::span<const std::int64_t> radii, int trials, std::uint64_t seed, int threads = 1,
    std::span<const double> certify_eps = {});

}  // namespace phasecover

#pragma once

#include <memory>
#include <span>

#include "phasecover/linalg.hpp"
#include "phasecover/spaces.hpp"

namespace phasecover {

/// Atoms and dual atoms attached to a relatively separated node set, all
/// dominated by translates of a shared nonnegative envelope. Carries the
/// dense matrices (atoms, duals, the projector onto the atomic span and an
/// orthonormal basis of that span) over the support universe; these are
/// immutable after construction, so copies are cheap and thread-safe.
class MoleculeSystem {
 public:
  MoleculeSystem(const Group& g, RelSepSet nodes, std::vector<GFunc> atoms,
                 std::vector<GFunc> duals, GFunc envelope, bool canonical_dual);

  const Group& group() const { return group_; }
  const RelSepSet& nodes() const { return nodes_; }
  const std::vector<GFunc>& atoms() const { return atoms_; }
  const std::vector<GFunc>& duals() const { return duals_; }
  const GFunc& envelope() const { return envelope_; }
  std::size_t count() const { return atoms_.size(); }

  bool canonical_dual() const { return canonical_dual_; }
  bool envelope_verified() const { return envelope_verified_; }
  void mark_envelope_verified(bool ok) { envelope_verified_ = ok; }

  const Universe& universe() const;
  /// |universe| x n matrices with the atoms / dual atoms as columns.
  const Eigen::MatrixXcd& atom_matrix() const;
  const Eigen::MatrixXcd& dual_matrix() const;
  /// Matrix of f -> sum_l <f, psi_l> phi_l on the universe.
  const Eigen::MatrixXcd& projector_matrix() const;
  /// Orthonormal basis of the atomic span.
  const Eigen::MatrixXcd& span_basis() const;
  int span_rank() const;

 private:
  Group group_;
  RelSepSet nodes_;
  std::vector<GFunc> atoms_;
  std::vector<GFunc> duals_;
  GFunc envelope_;
  bool canonical_dual_ = false;
  bool envelope_verified_ = false;

  struct Dense;
  std::shared_ptr<const Dense> dense_;
};

/// Pointwise maximum of |f_l(l * t)| over nodes and both families: the
/// tightest envelope that dominates the given system.
GFunc tightest_envelope(const Group& g, const RelSepSet& nodes,
                        std::span<const GFunc> atoms, std::span<const GFunc> duals);

/// Orthonormal deltas at the nodes; the projector restricts to the nodes.
MoleculeSystem delta_system(const Group& g, std::vector<Elem> node_points,
                            const Neighborhood& v);

/// Indicator blocks chi_{[k*width, (k+1)*width)} on Z_n with their exact
/// duals; the classical obstruction fixture for sign-changing symbols.
MoleculeSystem block_system(std::int64_t n, std::int64_t width, const Neighborhood& v);

/// Builds the dual family as the canonical dual frame of the atoms on their
/// span: the frame operator restricted to the span is inverted by
/// eigendecomposition with relative eigenvalue cutoff 1e-12.
MoleculeSystem with_canonical_duals(const Group& g, RelSepSet nodes,
                                    std::vector<GFunc> atoms, const Neighborhood& v);

struct EnvelopeReport {
  bool ok = false;
  double worst_excess = 0;  // max over both families of |f_l(x)| - h(l^{-1}x)
};

EnvelopeReport verify_envelope(const MoleculeSystem& sys);

/// Analysis against the dual atoms: c_l = <f, psi_l>.
DiscreteCoeffs analysis(const MoleculeSystem& sys, const GFunc& f);
/// Synthesis from the atoms: sum_l c_l phi_l.
GFunc synthesis(const MoleculeSystem& sys, std::span<const Cplx> coeffs);
/// Formal adjoints: the same maps with atom and dual-atom roles swapped.
DiscreteCoeffs analysis_adjoint(const MoleculeSystem& sys, const GFunc& f);
GFunc synthesis_adjoint(const MoleculeSystem& sys, std::span<const Cplx> coeffs);

/// P = synthesis after analysis; a projector onto the atomic span whenever
/// the system reproduces it.
GFunc projector(const MoleculeSystem& sys, const GFunc& f);

/// The domination kernel built from the envelope:
///   K(x) = sup_y sum_l h(l^{-1}y) h(l^{-1}yx),
/// with the sup taken exactly over the finitely many y with a nonzero sum.
/// Both sup-local amalgam norms over l^1_w are cached alongside.
struct KernelEnvelope {
  GFunc kernel;
  double amalgam_left = 0;
  double amalgam_right = 0;
};

KernelEnvelope kernel_envelope(const MoleculeSystem& sys, const Weight& w,
                               const Neighborhood& v);

struct DominationReport {
  double worst_excess = 0;
  int trials = 0;
};

/// Verifies |P(f)(x)| <= (|f| * K)(x) pointwise on random inputs.
DominationReport check_domination(const MoleculeSystem& sys, const KernelEnvelope& ke,
                                  int trials, std::uint64_t seed, int threads = 1);

}  // namespace phasecover

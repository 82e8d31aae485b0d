#pragma once

#include <span>
#include <vector>

#include "phasecover/molecules.hpp"

namespace phasecover {

/// A frame indexed by Z `intersect` [-radius, radius] whose Gramian decays
/// away from the diagonal; decay_profile[d] is the largest |<f_k, f_j>| over
/// pairs at distance d.
struct LocalizedFrame {
  std::int64_t radius = 0;
  Eigen::MatrixXcd vectors;  // columns f_k, k = -radius..radius
  Eigen::MatrixXcd duals;    // canonical dual g_k
  std::vector<double> decay_profile;
  double frame_lower = 0;
  double frame_upper = 0;
};

/// Riesz basis perturbed by exponentially decaying off-diagonal noise:
/// f_k = e_k + amplitude * sum_j exp(-rate |k-j|) u_{kj} e_j with |u| <= 1.
/// The perturbation stays a strict contraction, so the family is a frame.
LocalizedFrame make_exponential_frame(std::int64_t radius, double rate, double amplitude,
                                      std::uint64_t seed);

/// M_m(f) = sum_k m_k <f, f_k> g_k.
Eigen::VectorXcd frame_multiplier(const LocalizedFrame& frame,
                                  std::span<const Cplx> mask, const Eigen::VectorXcd& f);

/// The frame as a molecule system over the lattice Z: node k holds f_k as a
/// function on the index window, dual atoms are the canonical duals, and the
/// envelope is the tightest per-offset max over both families.
MoleculeSystem to_molecule_system(const LocalizedFrame& frame, const Neighborhood& v);

}  // namespace phasecover

#pragma once

#include <span>
#include <vector>

#include "phasecover/multiplier.hpp"

namespace phasecover {

/// Periodized centered gaussian window of length n.
Eigen::VectorXcd gaussian_window(std::int64_t n, double sigma = 1.0);

/// Time-frequency shift: (M_freq T_time h)(y) = e^{2 pi i freq y / n} h(y - time).
/// Indices reduce mod n.
Eigen::VectorXcd tf_shift(const Eigen::VectorXcd& h, std::int64_t time, std::int64_t freq);

/// Analysis against all time-frequency shifts of the window:
///   V(x, s) = <f, M_s T_x h>, a function on the plane Z_n x Z_n
/// (coordinate 0 = time, coordinate 1 = frequency).
GFunc stft(const Eigen::VectorXcd& f, const Eigen::VectorXcd& h);

/// Adjoint map: F on the plane back to a signal, sum of F(x,s) M_s T_x h.
Eigen::VectorXcd stft_adjoint(const GFunc& f_plane, const Eigen::VectorXcd& h);

/// Scaled so that f -> stft(f, h)/(sqrt(n)|h|) is an isometry on the full
/// lattice.
GFunc stft_isometric(const Eigen::VectorXcd& f, const Eigen::VectorXcd& h);
Eigen::VectorXcd stft_isometric_adjoint(const GFunc& f_plane, const Eigen::VectorXcd& h);

/// Canonical dual window: the inverse frame operator applied to h for the
/// lattice (a Z_n) x (b Z_n). Throws NumericError when the system is not a
/// frame (smallest eigenvalue below 1e-10 of the largest).
Eigen::VectorXcd canonical_dual_window(const Eigen::VectorXcd& h, std::int64_t a,
                                       std::int64_t b, double* frame_lower = nullptr,
                                       double* frame_upper = nullptr);

/// Masked resynthesis on the plane with an internally normalized window.
Eigen::VectorXcd localization_operator(const Eigen::VectorXcd& h, const GFunc& mask,
                                       const Eigen::VectorXcd& f);

/// A discrete Gabor frame and its image as a molecule system on the
/// time-frequency plane: atoms are the transforms of the lattice shifts of
/// the window, dual atoms those of the canonical dual window, and their
/// moduli (summed) serve as the common envelope.
struct GaborSystem {
  std::int64_t n = 0;
  std::int64_t a = 0;
  std::int64_t b = 0;
  Eigen::VectorXcd window;
  Eigen::VectorXcd dual_window;
  double frame_lower = 0;
  double frame_upper = 0;
  Group plane;
  MoleculeSystem system;
};

GaborSystem make_gabor_system(std::int64_t n, std::int64_t a, std::int64_t b,
                              Eigen::VectorXcd window, const Neighborhood& v);
GaborSystem make_gabor_system(std::int64_t n, std::int64_t a, std::int64_t b,
                              Eigen::VectorXcd window);

/// Largest a = b dividing n with redundancy n/(a b) at least two.
std::pair<std::int64_t, std::int64_t> default_gabor_lattice(std::int64_t n);

struct HarnessRow {
  double p = 2, q = 2, s = 2, t = 2;
  int trial_count = 0;
  double c_min = 0;
  double c_max = 0;
  std::vector<double> ratios;
};

struct HarnessExponents {
  double p = 2, q = 2, s = 2, t = 2;
};

/// Compares the plane mixed norm of the transform against the mixed sequence
/// norm of localized-piece norms, where each piece is measured by the
/// (s,t)-norm of its own transform. The partition must have a real sum
/// bounded away from zero and product-structured centers.
std::vector<HarnessRow> modulation_norm_harness(const Eigen::VectorXcd& h,
                                                const PartitionOfUnity& theta,
                                                std::span<const HarnessExponents> combos,
                                                const Weight& v, int trials,
                                                std::uint64_t seed);

}  // namespace phasecover

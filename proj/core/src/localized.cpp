#include "phasecover/localized.hpp"

#include <cmath>
#include <stdexcept>

#include "phasecover/rng.hpp"

namespace phasecover {

LocalizedFrame make_exponential_frame(std::int64_t radius, double rate, double amplitude,
                                      std::uint64_t seed) {
  if (radius < 1) throw std::invalid_argument("make_exponential_frame: radius must be positive");
  const std::int64_t n = 2 * radius + 1;
  Rng rng(seed);
  Eigen::MatrixXcd f = Eigen::MatrixXcd::Identity(n, n);
  for (std::int64_t k = 0; k < n; ++k) {
    for (std::int64_t j = 0; j < n; ++j) {
      if (j == k) continue;
      Cplx u = rng.cnormal();
      double mag = std::abs(u);
      if (mag > 1.0) u /= mag;
      f(j, k) += amplitude * std::exp(-rate * static_cast<double>(std::llabs(k - j))) * u;
    }
  }
  LocalizedFrame out;
  out.radius = radius;
  out.vectors = f;
  // Canonical duals of a Riesz basis: the biorthogonal family (F^H)^{-1}.
  out.duals = f.adjoint().inverse();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(f);
  double smin = svd.singularValues().minCoeff();
  double smax = svd.singularValues().maxCoeff();
  out.frame_lower = smin * smin;
  out.frame_upper = smax * smax;
  Eigen::MatrixXcd gram = f.adjoint() * f;
  out.decay_profile.assign(static_cast<std::size_t>(n), 0.0);
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 0; j < n; ++j) {
      auto d = static_cast<std::size_t>(std::llabs(i - j));
      out.decay_profile[d] = std::max(out.decay_profile[d], std::abs(gram(i, j)));
    }
  }
  return out;
}

Eigen::VectorXcd frame_multiplier(const LocalizedFrame& frame,
                                  std::span<const Cplx> mask, const Eigen::VectorXcd& f) {
  const std::int64_t n = frame.vectors.cols();
  if (static_cast<std::int64_t>(mask.size()) != n)
    throw std::invalid_argument("frame_multiplier: mask length mismatch");
  Eigen::VectorXcd coeffs = frame.vectors.adjoint() * f;
  for (std::int64_t k = 0; k < n; ++k) coeffs[k] *= mask[static_cast<std::size_t>(k)];
  return frame.duals * coeffs;
}

MoleculeSystem to_molecule_system(const LocalizedFrame& frame, const Neighborhood& v) {
  // The frame's phase space is its own index set: the analysis map sends f to
  // the sequence (<f, f_k>)_k on Z, and the image of the frame vector f_k is
  // the k-th Gramian column. Those columns are the atoms; the dual family is
  // their canonical dual on the span.
  Group g = Group::lattice(1);
  const std::int64_t n = frame.vectors.cols();
  Eigen::MatrixXcd gram = frame.vectors.adjoint() * frame.vectors;
  std::vector<Elem> node_points;
  std::vector<GFunc> atoms;
  for (std::int64_t k = 0; k < n; ++k) {
    node_points.push_back(elem(k - frame.radius));
    GFunc atom(g);
    for (std::int64_t j = 0; j < n; ++j) atom.set(elem(j - frame.radius), gram(j, k));
    atoms.push_back(std::move(atom));
  }
  return with_canonical_duals(g, RelSepSet(g, node_points, v), std::move(atoms), v);
}

}  // namespace phasecover

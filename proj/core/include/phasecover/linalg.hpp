#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "phasecover/gfunc.hpp"

namespace phasecover {

/// Ordered finite point list indexing the dense side of the computation.
/// All dense vectors and matrices over a system are indexed by a Universe.
class Universe {
 public:
  Universe(const Group& g, std::vector<Elem> points);

  const Group& group() const { return group_; }
  const std::vector<Elem>& points() const { return points_; }
  std::int64_t size() const { return static_cast<std::int64_t>(points_.size()); }
  std::int64_t index_of(const Elem& x) const;  // -1 if absent

 private:
  Group group_;
  std::vector<Elem> points_;  // sorted, canonical
};

/// Union of the supports of the given functions.
Universe support_universe(const Group& g, std::span<const GFunc> fs);

Eigen::VectorXcd to_dense(const Universe& u, const GFunc& f);
GFunc from_dense(const Universe& u, const Eigen::VectorXcd& x);

struct PinvResult {
  Eigen::MatrixXcd pinv;
  int rank = 0;
  double sigma_max = 0;
  double spectral_gap = 0;  // smallest retained singular value
};

/// Moore-Penrose pseudo-inverse with singular values below
/// rel_cutoff * sigma_max treated as zero.
PinvResult pinv_svd(const Eigen::MatrixXcd& a, double rel_cutoff = 1e-12);

/// Pseudo-inverse of a Hermitian matrix through its eigendecomposition,
/// discarding eigenvalues below rel_cutoff * max|eigenvalue|.
Eigen::MatrixXcd pinv_hermitian(const Eigen::MatrixXcd& a, double rel_cutoff = 1e-12);

/// Orthonormal basis of the column span (columns with sigma above cutoff).
Eigen::MatrixXcd orthonormal_range(const Eigen::MatrixXcd& a, double rel_cutoff = 1e-12);

/// Spectral norm (full SVD; for small matrices).
double op_norm(const Eigen::MatrixXcd& a);

/// Certified upper bound on the spectral norm: the smaller of the Frobenius
/// norm and the Schur bound sqrt(|a|_1 |a|_inf). O(n^2), used for tolerance
/// checks on large matrices.
double op_norm_bound(const Eigen::MatrixXcd& a);

}  // namespace phasecover

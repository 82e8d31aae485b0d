#include "phasecover/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace phasecover {

Universe::Universe(const Group& g, std::vector<Elem> points) : group_(g) {
  std::set<Elem> pts;
  for (const Elem& p : points) pts.insert(g.canon(p));
  points_.assign(pts.begin(), pts.end());
}

std::int64_t Universe::index_of(const Elem& x) const {
  Elem c = group_.canon(x);
  auto it = std::lower_bound(points_.begin(), points_.end(), c);
  if (it == points_.end() || *it != c) return -1;
  return it - points_.begin();
}

Universe support_universe(const Group& g, std::span<const GFunc> fs) {
  std::vector<Elem> pts;
  for (const GFunc& f : fs) {
    for (const auto& [x, v] : f.values()) pts.push_back(x);
  }
  return Universe(g, std::move(pts));
}

Eigen::VectorXcd to_dense(const Universe& u, const GFunc& f) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(u.size());
  for (const auto& [x, v] : f.values()) {
    std::int64_t i = u.index_of(x);
    if (i >= 0) out[i] = v;
  }
  return out;
}

GFunc from_dense(const Universe& u, const Eigen::VectorXcd& x) {
  if (x.size() != u.size()) throw std::invalid_argument("from_dense: size mismatch");
  GFunc f(u.group());
  for (std::int64_t i = 0; i < u.size(); ++i) {
    if (x[i] != Cplx(0.0)) f.set(u.points()[static_cast<std::size_t>(i)], x[i]);
  }
  return f;
}

PinvResult pinv_svd(const Eigen::MatrixXcd& a, double rel_cutoff) {
  if (a.rows() == 0 || a.cols() == 0) {
    return PinvResult{Eigen::MatrixXcd(a.cols(), a.rows()), 0, 0, 0};
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  PinvResult out;
  out.sigma_max = sigma.size() ? sigma[0] : 0.0;
  double cutoff = rel_cutoff * out.sigma_max;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sigma.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma[i] > cutoff && sigma[i] > 0) {
      inv[i] = 1.0 / sigma[i];
      out.rank++;
      out.spectral_gap = sigma[i];
    }
  }
  out.pinv = svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
  return out;
}

Eigen::MatrixXcd pinv_hermitian(const Eigen::MatrixXcd& a, double rel_cutoff) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(a);
  if (eig.info() != Eigen::Success) throw std::runtime_error("pinv_hermitian: eigendecomposition failed");
  Eigen::VectorXd vals = eig.eigenvalues();
  double biggest = 0;
  for (Eigen::Index i = 0; i < vals.size(); ++i) biggest = std::max(biggest, std::abs(vals[i]));
  double cutoff = rel_cutoff * biggest;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(vals.size());
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    if (std::abs(vals[i]) > cutoff) inv[i] = 1.0 / vals[i];
  }
  return eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().adjoint();
}

Eigen::MatrixXcd orthonormal_range(const Eigen::MatrixXcd& a, double rel_cutoff) {
  if (a.rows() == 0 || a.cols() == 0) return Eigen::MatrixXcd(a.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinU);
  const auto& sigma = svd.singularValues();
  double cutoff = sigma.size() ? rel_cutoff * sigma[0] : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma[i] > cutoff && sigma[i] > 0) ++rank;
  }
  return svd.matrixU().leftCols(rank);
}

double op_norm(const Eigen::MatrixXcd& a) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
}

double op_norm_bound(const Eigen::MatrixXcd& a) {
  if (a.size() == 0) return 0;
  Eigen::MatrixXd mags = a.cwiseAbs();
  double frob = mags.norm();
  double max_col = mags.colwise().sum().maxCoeff();
  double max_row = mags.rowwise().sum().maxCoeff();
  return std::min(frob, std::sqrt(max_col * max_row));
}

}  // namespace phasecover

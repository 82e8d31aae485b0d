#include "phasecover/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "phasecover/errors.hpp"
#include "phasecover/rng.hpp"

namespace phasecover {

SymbolMask SymbolMask::analyze(GFunc m, std::span<const Elem> window) {
  bool real = true;
  double lo = kInf, hi = -kInf;
  for (const Elem& x : window) {
    Cplx val = m.at(x);
    if (val.imag() != 0.0) real = false;
    lo = std::min(lo, val.real());
    hi = std::max(hi, val.real());
  }
  if (window.empty()) lo = hi = 0;
  bool positive = real && lo > 0 && hi < kInf;
  return SymbolMask{std::move(m), real, positive, lo, hi};
}

GFunc phase_multiplier(const MoleculeSystem& sys, const SymbolMask& mask, const GFunc& f) {
  return projector(sys, pointwise_mul(mask.m, f));
}

GFunc windowed_phase_multiplier(const MoleculeSystem& sys, const PartitionOfUnity& pu,
                                const SymbolMask& mask, const CoverWindow& u,
                                const GFunc& f) {
  if (!pu.exact_partition)
    throw std::invalid_argument("windowed_phase_multiplier: partition must sum to one");
  return projector(sys, approx_projector(sys, pu, u, pointwise_mul(mask.m, f)));
}

namespace {

Eigen::MatrixXcd mask_diagonal_times(const MoleculeSystem& sys, const SymbolMask& mask,
                                     const Eigen::MatrixXcd& rhs) {
  const Universe& uni = sys.universe();
  Eigen::MatrixXcd out = rhs;
  for (std::int64_t i = 0; i < uni.size(); ++i) {
    out.row(i) *= mask.m.at(uni.points()[static_cast<std::size_t>(i)]);
  }
  return out;
}

}  // namespace

Eigen::MatrixXcd phase_multiplier_matrix(const MoleculeSystem& sys, const SymbolMask& mask) {
  const Eigen::MatrixXcd& basis = sys.span_basis();
  return basis.adjoint() *
         (sys.projector_matrix() * mask_diagonal_times(sys, mask, basis));
}

Eigen::MatrixXcd windowed_phase_multiplier_matrix(const MoleculeSystem& sys,
                                                  const PartitionOfUnity& pu,
                                                  const SymbolMask& mask,
                                                  const CoverWindow& u) {
  if (!pu.exact_partition)
    throw std::invalid_argument("windowed_phase_multiplier_matrix: partition must sum to one");
  const Eigen::MatrixXcd& basis = sys.span_basis();
  Eigen::MatrixXcd pu_mat = approx_projector_matrix(sys, pu, u);
  return basis.adjoint() *
         (sys.projector_matrix() * (pu_mat * mask_diagonal_times(sys, mask, basis)));
}

void require_subgroup_window(const RelSepSet& nodes) {
  const Group& g = nodes.group();
  std::set<Elem> members(nodes.points().begin(), nodes.points().end());
  if (!members.count(g.identity()))
    throw std::invalid_argument("cd nodes: identity element missing");
  Elem lo = nodes.points()[0], hi = nodes.points()[0];
  for (const Elem& p : nodes.points()) {
    for (int i = 0; i < g.dim(); ++i) {
      lo.c[i] = std::min(lo.c[i], p.c[i]);
      hi.c[i] = std::max(hi.c[i], p.c[i]);
    }
  }
  auto inside_box = [&](const Elem& x) {
    for (int i = 0; i < g.dim(); ++i) {
      if (x.c[i] < lo.c[i] || x.c[i] > hi.c[i]) return false;
    }
    return true;
  };
  for (const Elem& a : nodes.points()) {
    Elem ainv = g.inverse(a);
    if (inside_box(ainv) && !members.count(ainv))
      throw std::invalid_argument("cd nodes: not closed under inversion at " +
                                  to_string(a, g.dim()));
    for (const Elem& b : nodes.points()) {
      Elem ab = g.op(a, b);
      if (inside_box(ab) && !members.count(ab))
        throw std::invalid_argument("cd nodes: not closed under the operation at " +
                                    to_string(a, g.dim()) + "*" + to_string(b, g.dim()));
    }
  }
}

CdNorm cd_norm(const Eigen::MatrixXcd& t, const RelSepSet& nodes, const Weight& w,
               Side side) {
  require_subgroup_window(nodes);
  const Group& g = nodes.group();
  const std::int64_t n = static_cast<std::int64_t>(nodes.size());
  if (t.rows() != n || t.cols() != n)
    throw std::invalid_argument("cd_norm: matrix size does not match the node set");
  CdNorm out;
  for (std::int64_t i = 0; i < n; ++i) {
    const Elem& li = nodes.points()[static_cast<std::size_t>(i)];
    for (std::int64_t j = 0; j < n; ++j) {
      const Elem& lj = nodes.points()[static_cast<std::size_t>(j)];
      Elem diff = side == Side::right ? g.op(g.inverse(lj), li) : g.op(li, g.inverse(lj));
      double a = std::abs(t(i, j));
      auto it = out.dominating.find(diff);
      if (it == out.dominating.end()) {
        out.dominating.emplace(diff, a);
      } else {
        it->second = std::max(it->second, a);
      }
    }
  }
  double norm = 0;
  for (const auto& [diff, a] : out.dominating) norm += a * w(diff);
  out.norm = norm;
  return out;
}

GramMatrix gram_matrix(const MoleculeSystem& sys, const SymbolMask& mask, const Weight& w) {
  if (!mask.real) throw std::invalid_argument("gram_matrix: mask must be real-valued");
  if (!sys.envelope_verified())
    throw std::invalid_argument("gram_matrix: system envelope not verified");
  const Universe& uni = sys.universe();
  const Eigen::MatrixXcd& phi = sys.atom_matrix();
  Eigen::MatrixXcd masked = phi;
  for (std::int64_t i = 0; i < uni.size(); ++i) {
    masked.row(i) *= mask.m.at(uni.points()[static_cast<std::size_t>(i)]);
  }
  GramMatrix out{sys.nodes(), phi.adjoint() * masked, {}, 0, 0, 0, {}};
  PinvResult pinv = pinv_svd(out.l, 1e-12);
  out.pinv = std::move(pinv.pinv);
  out.rank = pinv.rank;
  out.sigma_max = pinv.sigma_max;
  out.spectral_gap = pinv.spectral_gap;
  out.cd = cd_norm(out.l, sys.nodes(), w, Side::right);
  return out;
}

GFunc inverse_phase_multiplier(const MoleculeSystem& sys, const GramMatrix& gram,
                               const SymbolMask& mask, const GFunc& f) {
  if (!mask.positive_bounded)
    throw NumericError(
        "inverse_phase_multiplier: mask must be real with 0 < lower <= upper; "
        "sign-changing symbols can annihilate an atom and the operator is singular");
  DiscreteCoeffs coeffs = analysis_adjoint(sys, f);
  Eigen::VectorXcd c(static_cast<std::int64_t>(coeffs.values.size()));
  for (std::size_t i = 0; i < coeffs.values.size(); ++i)
    c[static_cast<std::int64_t>(i)] = coeffs.values[i];
  Eigen::VectorXcd solved = gram.pinv * c;
  std::vector<Cplx> sc(solved.data(), solved.data() + solved.size());
  return synthesis(sys, sc);
}

Eigen::MatrixXcd inverse_phase_multiplier_matrix(const MoleculeSystem& sys,
                                                 const GramMatrix& gram,
                                                 const SymbolMask& mask) {
  if (!mask.positive_bounded)
    throw NumericError("inverse_phase_multiplier_matrix: mask must be positive-bounded");
  const Eigen::MatrixXcd& basis = sys.span_basis();
  const Eigen::MatrixXcd& phi = sys.atom_matrix();
  return basis.adjoint() * (phi * (gram.pinv * (phi.adjoint() * basis)));
}

namespace {

double space_norm_dense(const Universe& uni, const Eigen::VectorXcd& x,
                        const SolidSpaceSpec& e) {
  GFunc f(uni.group());
  for (std::int64_t i = 0; i < uni.size(); ++i) {
    if (x[i] != Cplx(0.0)) f.set(uni.points()[static_cast<std::size_t>(i)], x[i]);
  }
  return space_norm(f, e);
}

}  // namespace

std::vector<EquivalenceRow> norm_equivalence_report(
    const MoleculeSystem& sys, const PartitionOfUnity& pu,
    std::span<const SolidSpaceSpec> environments, const SolidSpaceSpec& b,
    const SymbolMask* theta_mask, int trials, std::uint64_t seed, const Neighborhood& v) {
  if (theta_mask != nullptr) {
    if (!theta_mask->positive_bounded)
      throw NumericError("norm_equivalence_report: scaled families need a positive-bounded mask");
    if (!sys.canonical_dual())
      throw std::invalid_argument("norm_equivalence_report: scaled families need canonical duals");
    require_subgroup_window(sys.nodes());
  }
  const Universe& uni = sys.universe();
  const std::int64_t n = static_cast<std::int64_t>(sys.count());
  const Group& g = sys.group();

  // The localized family: eta_c or theta_c = mask * eta_c.
  std::vector<GFunc> family;
  family.reserve(pu.functions.size());
  for (const GFunc& eta : pu.functions) {
    family.push_back(theta_mask ? pointwise_mul(theta_mask->m, eta) : eta);
  }
  std::vector<Eigen::VectorXcd> family_dense;
  family_dense.reserve(family.size());
  for (const GFunc& th : family) family_dense.push_back(to_dense(uni, th));

  // Trial vectors in the span: gaussian coefficients pushed through synthesis.
  Rng rng(seed);
  std::vector<Eigen::VectorXcd> fs;
  fs.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXcd c(n);
    for (std::int64_t i = 0; i < n; ++i) c[i] = rng.cnormal();
    fs.push_back(sys.atom_matrix() * c);
  }

  // Per-trial localized piece norms (independent of the environment space).
  const std::size_t nc = family.size();
  std::vector<std::vector<Cplx>> piece_norms(fs.size());
  for (std::size_t t = 0; t < fs.size(); ++t) {
    piece_norms[t].resize(nc);
    for (std::size_t ci = 0; ci < nc; ++ci) {
      Eigen::VectorXcd masked = fs[t].cwiseProduct(family_dense[ci]);
      Eigen::VectorXcd piece =
          sys.atom_matrix() * (sys.dual_matrix().adjoint() * masked);
      piece_norms[t][ci] = space_norm_dense(uni, piece, b);
    }
  }

  std::vector<EquivalenceRow> rows;
  for (const SolidSpaceSpec& e : environments) {
    if (!(e.group == g)) throw std::invalid_argument("norm_equivalence_report: carrier mismatch");
    EquivalenceRow row;
    row.space = e.label();
    row.p = e.p;
    row.q = e.split_dim ? e.q : e.p;
    row.weight = e.v.label();
    row.c_min = kInf;
    row.c_max = 0;
    for (std::size_t t = 0; t < fs.size(); ++t) {
      double lhs = space_norm_dense(uni, fs[t], e);
      if (lhs == 0.0) continue;  // zero trial vectors are skipped
      DiscreteCoeffs coeffs{pu.centers, piece_norms[t]};
      double rhs = ed_norm(coeffs, e, v);
      double ratio = rhs / lhs;
      row.ratios.push_back(ratio);
      row.c_min = std::min(row.c_min, ratio);
      row.c_max = std::max(row.c_max, ratio);
    }
    row.trial_count = static_cast<int>(row.ratios.size());
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace phasecover

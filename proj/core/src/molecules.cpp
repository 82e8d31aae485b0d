#include "phasecover/molecules.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "phasecover/rng.hpp"
#include "phasecover/threads.hpp"

namespace phasecover {

struct MoleculeSystem::Dense {
  Universe universe;
  Eigen::MatrixXcd phi;
  Eigen::MatrixXcd psi;
  Eigen::MatrixXcd proj;
  Eigen::MatrixXcd basis;
};

MoleculeSystem::MoleculeSystem(const Group& g, RelSepSet nodes, std::vector<GFunc> atoms,
                               std::vector<GFunc> duals, GFunc envelope, bool canonical_dual)
    : group_(g),
      nodes_(std::move(nodes)),
      atoms_(std::move(atoms)),
      duals_(std::move(duals)),
      envelope_(std::move(envelope)),
      canonical_dual_(canonical_dual) {
  if (atoms_.size() != nodes_.size() || duals_.size() != nodes_.size())
    throw std::invalid_argument("MoleculeSystem: node/atom/dual count mismatch");
  for (const auto& [x, val] : envelope_.values()) {
    if (val.imag() != 0.0 || val.real() < 0.0)
      throw std::invalid_argument("MoleculeSystem: envelope must be nonnegative");
  }
  std::vector<GFunc> all = atoms_;
  all.insert(all.end(), duals_.begin(), duals_.end());
  auto dense = std::make_shared<Dense>(Dense{support_universe(g, all), {}, {}, {}, {}});
  const std::int64_t m = dense->universe.size();
  const std::int64_t n = static_cast<std::int64_t>(atoms_.size());
  dense->phi.resize(m, n);
  dense->psi.resize(m, n);
  for (std::int64_t j = 0; j < n; ++j) {
    dense->phi.col(j) = to_dense(dense->universe, atoms_[static_cast<std::size_t>(j)]);
    dense->psi.col(j) = to_dense(dense->universe, duals_[static_cast<std::size_t>(j)]);
  }
  dense->proj = dense->phi * dense->psi.adjoint();
  dense->basis = orthonormal_range(dense->phi);
  dense_ = std::move(dense);
}

const Universe& MoleculeSystem::universe() const { return dense_->universe; }
const Eigen::MatrixXcd& MoleculeSystem::atom_matrix() const { return dense_->phi; }
const Eigen::MatrixXcd& MoleculeSystem::dual_matrix() const { return dense_->psi; }
const Eigen::MatrixXcd& MoleculeSystem::projector_matrix() const { return dense_->proj; }
const Eigen::MatrixXcd& MoleculeSystem::span_basis() const { return dense_->basis; }
int MoleculeSystem::span_rank() const { return static_cast<int>(dense_->basis.cols()); }

GFunc tightest_envelope(const Group& g, const RelSepSet& nodes,
                        std::span<const GFunc> atoms, std::span<const GFunc> duals) {
  GFunc env(g);
  auto absorb = [&](std::span<const GFunc> family) {
    for (std::size_t i = 0; i < family.size(); ++i) {
      const Elem& node = nodes.points()[i];
      Elem inv = g.inverse(node);
      for (const auto& [x, val] : family[i].values()) {
        Elem t = g.op(inv, x);
        double a = std::abs(val);
        if (a > env.at(t).real()) env.set(t, a);
      }
    }
  };
  absorb(atoms);
  absorb(duals);
  return env;
}

MoleculeSystem delta_system(const Group& g, std::vector<Elem> node_points,
                            const Neighborhood& v) {
  RelSepSet nodes(g, std::move(node_points), v);
  std::vector<GFunc> atoms;
  atoms.reserve(nodes.size());
  for (const Elem& l : nodes.points()) atoms.push_back(GFunc::delta(g, l));
  std::vector<GFunc> duals = atoms;
  GFunc env = GFunc::delta(g, g.identity());
  MoleculeSystem sys(g, std::move(nodes), std::move(atoms), std::move(duals), std::move(env),
                     /*canonical_dual=*/true);
  sys.mark_envelope_verified(verify_envelope(sys).ok);
  return sys;
}

MoleculeSystem block_system(std::int64_t n, std::int64_t width, const Neighborhood& v) {
  if (width < 1 || n % width != 0)
    throw std::invalid_argument("block_system: width must divide n");
  Group g = Group::cyclic(1, n);
  std::vector<Elem> node_points;
  std::vector<GFunc> atoms, duals;
  for (std::int64_t k = 0; k < n / width; ++k) {
    node_points.push_back(elem(k * width));
    GFunc block(g);
    for (std::int64_t t = 0; t < width; ++t) block.set(elem(k * width + t), 1.0);
    atoms.push_back(block);
    duals.push_back(scaled(block, 1.0 / static_cast<double>(width)));
  }
  GFunc env(g);
  for (std::int64_t t = 0; t < width; ++t) env.set(elem(t), 1.0);
  RelSepSet nodes(g, std::move(node_points), v);
  MoleculeSystem sys(g, std::move(nodes), std::move(atoms), std::move(duals), std::move(env),
                     /*canonical_dual=*/true);
  sys.mark_envelope_verified(verify_envelope(sys).ok);
  return sys;
}

MoleculeSystem with_canonical_duals(const Group& g, RelSepSet nodes,
                                    std::vector<GFunc> atoms, const Neighborhood& v) {
  (void)v;
  Universe u = support_universe(g, atoms);
  const std::int64_t m = u.size();
  const std::int64_t n = static_cast<std::int64_t>(atoms.size());
  Eigen::MatrixXcd phi(m, n);
  for (std::int64_t j = 0; j < n; ++j)
    phi.col(j) = to_dense(u, atoms[static_cast<std::size_t>(j)]);
  // Dual family psi = phi (phi^H phi)^+ : applying the inverted span-restricted
  // frame operator to each atom.
  Eigen::MatrixXcd gram = phi.adjoint() * phi;
  Eigen::MatrixXcd psi = phi * pinv_hermitian(gram, 1e-12);
  std::vector<GFunc> duals;
  duals.reserve(static_cast<std::size_t>(n));
  for (std::int64_t j = 0; j < n; ++j) duals.push_back(from_dense(u, psi.col(j)));
  GFunc env = tightest_envelope(g, nodes, atoms, duals);
  MoleculeSystem sys(g, std::move(nodes), std::move(atoms), std::move(duals), std::move(env),
                     /*canonical_dual=*/true);
  sys.mark_envelope_verified(verify_envelope(sys).ok);
  return sys;
}

EnvelopeReport verify_envelope(const MoleculeSystem& sys) {
  const Group& g = sys.group();
  double worst = -kInf;
  auto scan = [&](const std::vector<GFunc>& family) {
    for (std::size_t i = 0; i < family.size(); ++i) {
      Elem inv = g.inverse(sys.nodes().points()[i]);
      for (const auto& [x, val] : family[i].values()) {
        double excess = std::abs(val) - sys.envelope().at(g.op(inv, x)).real();
        worst = std::max(worst, excess);
      }
    }
  };
  scan(sys.atoms());
  scan(sys.duals());
  if (worst == -kInf) worst = 0;
  return EnvelopeReport{worst <= 0.0, worst};
}

DiscreteCoeffs analysis(const MoleculeSystem& sys, const GFunc& f) {
  DiscreteCoeffs out{sys.nodes(), {}};
  out.values.reserve(sys.count());
  for (const GFunc& psi : sys.duals()) out.values.push_back(inner_product(f, psi));
  return out;
}

GFunc synthesis(const MoleculeSystem& sys, std::span<const Cplx> coeffs) {
  if (coeffs.size() != sys.count())
    throw std::invalid_argument("synthesis: coefficient count mismatch");
  GFunc out(sys.group());
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == Cplx(0.0)) continue;
    for (const auto& [x, val] : sys.atoms()[i].values()) out.add(x, coeffs[i] * val);
  }
  return out;
}

DiscreteCoeffs analysis_adjoint(const MoleculeSystem& sys, const GFunc& f) {
  DiscreteCoeffs out{sys.nodes(), {}};
  out.values.reserve(sys.count());
  for (const GFunc& phi : sys.atoms()) out.values.push_back(inner_product(f, phi));
  return out;
}

GFunc synthesis_adjoint(const MoleculeSystem& sys, std::span<const Cplx> coeffs) {
  if (coeffs.size() != sys.count())
    throw std::invalid_argument("synthesis_adjoint: coefficient count mismatch");
  GFunc out(sys.group());
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == Cplx(0.0)) continue;
    for (const auto& [x, val] : sys.duals()[i].values()) out.add(x, coeffs[i] * val);
  }
  return out;
}

GFunc projector(const MoleculeSystem& sys, const GFunc& f) {
  return synthesis(sys, analysis(sys, f).values);
}

namespace {

// Dense kernel computation on a full cyclic carrier. For each y, the inner
// sum over nodes is a weighted stack of shifted envelope copies; the kernel
// is the pointwise max of those stacks over y.
GFunc kernel_envelope_cyclic(const MoleculeSystem& sys) {
  const Group& g = sys.group();
  const std::int64_t m = g.size();
  const int dim = g.dim();
  const std::int64_t n = g.modulus();
  auto all = g.all_elements();
  std::vector<double> hd(static_cast<std::size_t>(m), 0.0);
  std::vector<std::int64_t> strides(static_cast<std::size_t>(dim));
  strides[static_cast<std::size_t>(dim - 1)] = 1;
  for (int i = dim - 2; i >= 0; --i)
    strides[static_cast<std::size_t>(i)] = strides[static_cast<std::size_t>(i + 1)] * n;
  auto flat = [&](const Elem& x) {
    std::int64_t idx = 0;
    for (int i = 0; i < dim; ++i) idx += strides[static_cast<std::size_t>(i)] * x.c[i];
    return idx;
  };
  for (const auto& [x, val] : sys.envelope().values())
    hd[static_cast<std::size_t>(flat(x))] = val.real();

  // Shift table: shifted[i] = flat(element(i) + offset) for the current offset.
  std::vector<double> best(static_cast<std::size_t>(m), 0.0);
  std::vector<double> stack(static_cast<std::size_t>(m), 0.0);
  std::vector<std::int64_t> coord(static_cast<std::size_t>(dim), 0);
  for (std::int64_t y = 0; y < m; ++y) {
    const Elem& ye = all[static_cast<std::size_t>(y)];
    bool any = false;
    std::fill(stack.begin(), stack.end(), 0.0);
    for (const Elem& node : sys.nodes().points()) {
      Elem off = g.op(ye, g.inverse(node));  // l^{-1} y
      double c = hd[static_cast<std::size_t>(flat(off))];
      if (c == 0.0) continue;
      any = true;
      // stack[x] += c * h(off + x), walking x in flat order.
      std::fill(coord.begin(), coord.end(), 0);
      for (std::int64_t x = 0; x < m; ++x) {
        std::int64_t shifted = 0;
        for (int i = 0; i < dim; ++i) {
          std::int64_t s = coord[static_cast<std::size_t>(i)] + off.c[i];
          if (s >= n) s -= n;
          shifted += strides[static_cast<std::size_t>(i)] * s;
        }
        stack[static_cast<std::size_t>(x)] += c * hd[static_cast<std::size_t>(shifted)];
        for (int i = dim - 1; i >= 0; --i) {
          if (++coord[static_cast<std::size_t>(i)] < n) break;
          coord[static_cast<std::size_t>(i)] = 0;
        }
      }
    }
    if (!any) continue;
    for (std::int64_t x = 0; x < m; ++x)
      best[static_cast<std::size_t>(x)] = std::max(best[static_cast<std::size_t>(x)],
                                                   stack[static_cast<std::size_t>(x)]);
  }
  GFunc kernel(g);
  for (std::int64_t x = 0; x < m; ++x) {
    if (best[static_cast<std::size_t>(x)] != 0.0)
      kernel.set(all[static_cast<std::size_t>(x)], best[static_cast<std::size_t>(x)]);
  }
  return kernel;
}

GFunc kernel_envelope_sparse(const MoleculeSystem& sys) {
  const Group& g = sys.group();
  const GFunc& h = sys.envelope();
  // Candidate y: anywhere some h(l^{-1}y) is nonzero.
  std::set<Elem> ys;
  for (const Elem& node : sys.nodes().points()) {
    for (const auto& [s, val] : h.values()) ys.insert(g.op(node, s));
  }
  GFunc kernel(g);
  for (const Elem& y : ys) {
    std::map<Elem, double> stack;
    for (const Elem& node : sys.nodes().points()) {
      Elem off = g.op(g.inverse(node), y);
      double c = std::abs(h.at(off));
      if (c == 0.0) continue;
      Elem offinv = g.inverse(off);
      for (const auto& [s, val] : h.values()) {
        stack[g.op(offinv, s)] += c * val.real();
      }
    }
    for (const auto& [x, val] : stack) {
      if (val > kernel.at(x).real()) kernel.set(x, val);
    }
  }
  return kernel;
}

}  // namespace

KernelEnvelope kernel_envelope(const MoleculeSystem& sys, const Weight& w,
                               const Neighborhood& v) {
  GFunc kernel = sys.group().kind() == Group::Kind::cyclic ? kernel_envelope_cyclic(sys)
                                                           : kernel_envelope_sparse(sys);
  double left = amalgam_norm(kernel, AmalgamKind::left, w, v);
  double right = amalgam_norm(kernel, AmalgamKind::right, w, v);
  return KernelEnvelope{std::move(kernel), left, right};
}

DominationReport check_domination(const MoleculeSystem& sys, const KernelEnvelope& ke,
                                  int trials, std::uint64_t seed, int threads) {
  const Universe& u = sys.universe();
  const std::int64_t m = u.size();
  // Draw all trial vectors up front so the stream is independent of the
  // thread count.
  std::vector<Eigen::VectorXcd> fs;
  fs.reserve(static_cast<std::size_t>(trials));
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXcd f(m);
    for (std::int64_t i = 0; i < m; ++i) f[i] = rng.cnormal();
    fs.push_back(std::move(f));
  }
  std::vector<double> worst(static_cast<std::size_t>(trials), 0.0);
  const Group& g = sys.group();
  // Kernel values at y^{-1}x for universe pairs, tabulated once.
  Eigen::MatrixXd ktab(m, m);
  for (std::int64_t yi = 0; yi < m; ++yi) {
    Elem yinv = g.inverse(u.points()[static_cast<std::size_t>(yi)]);
    for (std::int64_t xi = 0; xi < m; ++xi) {
      ktab(yi, xi) =
          ke.kernel.at(g.op(yinv, u.points()[static_cast<std::size_t>(xi)])).real();
    }
  }
  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
    Eigen::VectorXcd pf = sys.projector_matrix() * fs[t];
    // rhs(x) = sum_y |f(y)| K(y^{-1} x), evaluated at universe points.
    Eigen::VectorXd fabsv = fs[t].cwiseAbs();
    Eigen::VectorXd rhs = ktab.transpose() * fabsv;
    double w = -kInf;
    for (std::int64_t xi = 0; xi < m; ++xi) w = std::max(w, std::abs(pf[xi]) - rhs[xi]);
    worst[t] = w;
  });
  DominationReport rep;
  rep.trials = trials;
  rep.worst_excess = -kInf;
  for (double w : worst) rep.worst_excess = std::max(rep.worst_excess, w);
  if (trials == 0) rep.worst_excess = 0;
  return rep;
}

}  // namespace phasecover

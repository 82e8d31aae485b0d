#include "phasecover/partition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "phasecover/errors.hpp"
#include "phasecover/rng.hpp"
#include "phasecover/threads.hpp"

namespace phasecover {

namespace {

double profile_1d(BupuProfile profile, double t, double width) {
  switch (profile) {
    case BupuProfile::triangular: {
      double a = std::abs(t) / width;
      return a >= 1.0 ? 0.0 : 1.0 - a;
    }
    case BupuProfile::raised_cosine: {
      if (std::abs(t) >= width / 2.0) return 0.0;
      double c = std::cos(3.14159265358979323846 * t / width);
      return c * c;
    }
    case BupuProfile::gaussian_normalized:
      return std::exp(-t * t / (2.0 * width * width));
  }
  return 0.0;
}

double profile_at(const Group& g, BupuProfile profile, double width, const Elem& offset) {
  Elem r = g.min_residue(offset);
  double p = 1.0;
  for (int i = 0; i < g.dim(); ++i) {
    p *= profile_1d(profile, static_cast<double>(r.c[i]), width);
    if (p == 0.0) return 0.0;
  }
  return p;
}

std::vector<Elem> default_window(const Group& g, std::span<const Elem> centers) {
  if (g.kind() == Group::Kind::cyclic) return g.all_elements();
  // Bounding box of the centers.
  Elem lo = centers[0], hi = centers[0];
  for (const Elem& c : centers) {
    for (int i = 0; i < g.dim(); ++i) {
      lo.c[i] = std::min(lo.c[i], c.c[i]);
      hi.c[i] = std::max(hi.c[i], c.c[i]);
    }
  }
  std::vector<Elem> out;
  std::vector<std::int64_t> idx(static_cast<std::size_t>(g.dim()));
  for (int i = 0; i < g.dim(); ++i) idx[static_cast<std::size_t>(i)] = lo.c[i];
  for (;;) {
    Elem e;
    for (int i = 0; i < g.dim(); ++i) e.c[i] = idx[static_cast<std::size_t>(i)];
    out.push_back(e);
    int i = g.dim() - 1;
    for (; i >= 0; --i) {
      if (++idx[static_cast<std::size_t>(i)] <= hi.c[i]) break;
      idx[static_cast<std::size_t>(i)] = lo.c[i];
    }
    if (i < 0) break;
  }
  return out;
}

}  // namespace

PartitionOfUnity build_bupu(const Group& g, std::vector<Elem> centers, BupuProfile profile,
                            double width, const Neighborhood& v, std::vector<Elem> window) {
  if (centers.empty()) throw std::invalid_argument("build_bupu: no centers");
  for (Elem& c : centers) c = g.canon(c);
  if (window.empty()) window = default_window(g, centers);
  for (Elem& x : window) x = g.canon(x);
  std::sort(window.begin(), window.end());
  window.erase(std::unique(window.begin(), window.end()), window.end());

  // Normalizer s(x) = sum over centers of the shifted profile.
  std::map<Elem, double> normalizer;
  for (const Elem& x : window) {
    double s = 0;
    for (const Elem& c : centers) s += profile_at(g, profile, width, g.op(g.inverse(c), x));
    if (s <= 0.0)
      throw NumericError("build_bupu: coverage gap at " + to_string(x, g.dim()));
    normalizer[x] = s;
  }

  PartitionOfUnity pu{g, RelSepSet(g, centers, v), {}, GFunc(g), 0, 0, false, window};
  pu.functions.reserve(centers.size());
  for (const Elem& c : centers) {
    GFunc eta(g);
    Elem cinv = g.inverse(c);
    for (const Elem& x : window) {
      double p = profile_at(g, profile, width, g.op(cinv, x));
      if (p != 0.0) eta.set(x, p / normalizer.at(x));
    }
    pu.functions.push_back(std::move(eta));
  }

  // Envelope: exhaustive pointwise max of the recentered members.
  GFunc env(g);
  for (std::size_t i = 0; i < pu.functions.size(); ++i) {
    Elem cinv = g.inverse(centers[i]);
    for (const auto& [x, val] : pu.functions[i].values()) {
      Elem t = g.op(cinv, x);
      double a = std::abs(val);
      if (a > env.at(t).real()) env.set(t, a);
    }
  }
  pu.envelope = std::move(env);

  double lo = kInf, hi = -kInf;
  for (const Elem& x : window) {
    double s = 0;
    for (const GFunc& eta : pu.functions) s += eta.at(x).real();
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  pu.sum_lower = lo;
  pu.sum_upper = hi;
  pu.exact_partition = std::abs(lo - 1.0) <= 1e-12 && std::abs(hi - 1.0) <= 1e-12;
  return pu;
}

PartitionOfUnity scaled_partition(const PartitionOfUnity& pu, const GFunc& mask) {
  for (const auto& [x, val] : mask.values()) {
    if (val.imag() != 0.0)
      throw std::invalid_argument("scaled_partition: mask must be real-valued");
  }
  PartitionOfUnity out{pu.group, pu.centers, {}, GFunc(pu.group), 0, 0, false, pu.window};
  out.functions.reserve(pu.functions.size());
  for (const GFunc& eta : pu.functions) out.functions.push_back(pointwise_mul(mask, eta));

  const Group& g = pu.group;
  GFunc env(g);
  for (std::size_t i = 0; i < out.functions.size(); ++i) {
    Elem cinv = g.inverse(pu.centers.points()[i]);
    for (const auto& [x, val] : out.functions[i].values()) {
      Elem t = g.op(cinv, x);
      double a = std::abs(val);
      if (a > env.at(t).real()) env.set(t, a);
    }
  }
  out.envelope = std::move(env);

  double lo = kInf, hi = -kInf;
  for (const Elem& x : pu.window) {
    double s = 0;
    for (const GFunc& th : out.functions) s += th.at(x).real();
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  out.sum_lower = lo;
  out.sum_upper = hi;
  out.exact_partition = false;
  return out;
}

VectorCoeffs vector_analysis(const MoleculeSystem& sys, const PartitionOfUnity& pu,
                             const GFunc& f) {
  VectorCoeffs out{pu.centers, {}};
  out.entries.reserve(pu.functions.size());
  for (const GFunc& eta : pu.functions) {
    out.entries.push_back(projector(sys, pointwise_mul(f, eta)));
  }
  return out;
}

GFunc vector_synthesis(const MoleculeSystem& sys, const PartitionOfUnity& pu,
                       const VectorCoeffs& f, const CoverWindow& u) {
  if (f.entries.size() != pu.functions.size())
    throw std::invalid_argument("vector_synthesis: entry count mismatch");
  const Group& g = sys.group();
  GFunc out(g);
  for (std::size_t i = 0; i < f.entries.size(); ++i) {
    GFunc piece = projector(sys, f.entries[i]);
    Elem cinv = g.inverse(pu.centers.points()[i]);
    for (const auto& [x, val] : piece.values()) {
      if (u.contains(g.op(cinv, x))) out.add(x, val);
    }
  }
  return out;
}

GFunc approx_projector(const MoleculeSystem& sys, const PartitionOfUnity& pu,
                       const CoverWindow& u, const GFunc& f) {
  if (!pu.exact_partition)
    throw std::invalid_argument(
        "approx_projector: partition must sum to one (use the multiplier path for scaled families)");
  return vector_synthesis(sys, pu, vector_analysis(sys, pu, f), u);
}

Eigen::MatrixXcd approx_projector_matrix(const MoleculeSystem& sys,
                                         const PartitionOfUnity& pu, const CoverWindow& u) {
  const Universe& uni = sys.universe();
  const std::int64_t m = uni.size();
  const Eigen::MatrixXcd& p = sys.projector_matrix();
  const Group& g = sys.group();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m, m);
  std::vector<char> keep(static_cast<std::size_t>(m));
  for (std::size_t ci = 0; ci < pu.functions.size(); ++ci) {
    Elem cinv = g.inverse(pu.centers.points()[ci]);
    for (std::int64_t i = 0; i < m; ++i) {
      keep[static_cast<std::size_t>(i)] =
          u.contains(g.op(cinv, uni.points()[static_cast<std::size_t>(i)]));
    }
    for (const auto& [x, val] : pu.functions[ci].values()) {
      std::int64_t j = uni.index_of(x);
      if (j < 0) continue;
      for (std::int64_t i = 0; i < m; ++i) {
        if (keep[static_cast<std::size_t>(i)]) out(i, j) += val * p(i, j);
      }
    }
  }
  return out;
}

namespace {

GFunc cover_leakage_impl(const PartitionOfUnity& pu, const CoverWindow& u,
                         const Neighborhood& v, std::span<const Elem> eval_points) {
  const Group& g = pu.group;
  GFunc smoothed = convolve(abs_fn(pu.envelope), GFunc::indicator(g, v.points()));
  // Contributions indexed by y: pairs (c^{-1}y, value) for every center.
  struct Term {
    Elem shift;  // c^{-1} y
    double value;
  };
  std::map<Elem, std::vector<Term>> by_y;
  for (const Elem& c : pu.centers.points()) {
    for (const auto& [s, val] : smoothed.values()) {
      by_y[g.op(c, s)].push_back(Term{s, val.real()});
    }
  }
  GFunc out(g);
  for (const Elem& x : eval_points) {
    double best = 0;
    for (const auto& [y, terms] : by_y) {
      double sum = 0;
      for (const Term& t : terms) {
        if (!u.contains(g.op(t.shift, x))) sum += t.value;
      }
      best = std::max(best, sum);
    }
    if (best != 0.0) out.set(x, best);
  }
  return out;
}

}  // namespace

GFunc cover_leakage(const PartitionOfUnity& pu, const CoverWindow& u, const Neighborhood& v,
                    std::span<const Elem> eval_points) {
  return cover_leakage_impl(pu, u, v, eval_points);
}

GFunc cover_leakage(const PartitionOfUnity& pu, const CoverWindow& u, const Neighborhood& v) {
  if (pu.group.kind() != Group::Kind::cyclic)
    throw std::invalid_argument(
        "cover_leakage: lattice carriers need an explicit evaluation set");
  auto all = pu.group.all_elements();
  return cover_leakage_impl(pu, u, v, all);
}

CoverCertificate projector_cover_certificate(
    const MoleculeSystem& sys, const PartitionOfUnity& pu, const KernelEnvelope& ke,
    const SolidSpaceSpec& e, const Weight& w, const Neighborhood& v,
    std::span<const std::int64_t> radii, int trials, std::uint64_t seed, int threads,
    std::span<const double> certify_eps) {
  const Universe& uni = sys.universe();
  const std::int64_t m = uni.size();

  std::vector<Eigen::VectorXcd> probes;
  probes.reserve(static_cast<std::size_t>(trials) + sys.count());
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXcd f(m);
    for (std::int64_t i = 0; i < m; ++i) f[i] = rng.cnormal();
    probes.push_back(std::move(f));
  }
  for (std::size_t j = 0; j < sys.count(); ++j) probes.push_back(sys.atom_matrix().col(j));

  const std::size_t np = probes.size();
  std::vector<double> wnorm(np);
  std::vector<Eigen::VectorXcd> pf(np);
  parallel_for(np, threads, [&](std::size_t i) {
    GFunc f = from_dense(uni, probes[i]);
    wnorm[i] = amalgam_norm(f, AmalgamKind::left, e, v);
    pf[i] = sys.projector_matrix() * probes[i];
  });

  GFunc kernel_sharp = local_max(ke.kernel, v, Side::right);
  std::vector<Elem> eval;
  eval.reserve(kernel_sharp.support_size());
  for (const auto& [x, val] : kernel_sharp.values()) eval.push_back(x);

  CoverCertificate cert;
  for (std::int64_t r : radii) {
    CoverWindow u{sys.group(), r};
    Eigen::MatrixXcd pu_mat = approx_projector_matrix(sys, pu, u);
    std::vector<double> errs(np, 0.0);
    parallel_for(np, threads, [&](std::size_t i) {
      if (wnorm[i] == 0.0) return;
      GFunc diff = from_dense(uni, pf[i] - pu_mat * probes[i]);
      errs[i] = space_norm(diff, e) / wnorm[i];
    });
    double empirical = 0;
    for (double er : errs) empirical = std::max(empirical, er);
    GFunc leak = cover_leakage(pu, u, v, eval);
    double bound = weighted_l1(pointwise_mul(kernel_sharp, leak), w);
    cert.rows.push_back(CertificateRow{r, empirical, bound});
  }
  for (double eps : certify_eps) {
    std::int64_t found = -1;
    for (const CertificateRow& row : cert.rows) {
      if (row.theory_bound <= eps) {
        found = row.u_radius;
        break;
      }
    }
    cert.certified.emplace_back(eps, found);
  }
  return cert;
}

}  // namespace phasecover

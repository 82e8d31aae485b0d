#include "phasecover/gabor.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "phasecover/errors.hpp"
#include "phasecover/rng.hpp"

namespace phasecover {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::int64_t mod(std::int64_t x, std::int64_t n) {
  std::int64_t r = x % n;
  return r < 0 ? r + n : r;
}

// e^{-2 pi i k / n} for k = 0..n-1.
std::vector<Cplx> twiddles(std::int64_t n) {
  std::vector<Cplx> w(static_cast<std::size_t>(n));
  for (std::int64_t k = 0; k < n; ++k) {
    double a = -2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
    w[static_cast<std::size_t>(k)] = Cplx(std::cos(a), std::sin(a));
  }
  return w;
}

}  // namespace

Eigen::VectorXcd gaussian_window(std::int64_t n, double sigma) {
  if (n < 1) throw std::invalid_argument("gaussian_window: n must be positive");
  Eigen::VectorXcd h(n);
  double center = static_cast<double>(n) / 2.0;
  for (std::int64_t t = 0; t < n; ++t) {
    double s = 0;
    for (int k = -3; k <= 3; ++k) {
      double d = static_cast<double>(t) - center + static_cast<double>(k) * static_cast<double>(n);
      s += std::exp(-kPi * d * d / (static_cast<double>(n) * sigma));
    }
    h[t] = s;
  }
  return h;
}

Eigen::VectorXcd tf_shift(const Eigen::VectorXcd& h, std::int64_t time, std::int64_t freq) {
  const std::int64_t n = h.size();
  Eigen::VectorXcd out(n);
  for (std::int64_t y = 0; y < n; ++y) {
    double a = 2.0 * kPi * static_cast<double>(mod(freq, n)) * static_cast<double>(y) /
               static_cast<double>(n);
    out[y] = Cplx(std::cos(a), std::sin(a)) * h[mod(y - time, n)];
  }
  return out;
}

GFunc stft(const Eigen::VectorXcd& f, const Eigen::VectorXcd& h) {
  const std::int64_t n = f.size();
  if (h.size() != n) throw std::invalid_argument("stft: signal/window length mismatch");
  if (h.norm() == 0.0) throw std::invalid_argument("stft: zero window");
  Group plane = Group::cyclic(2, n);
  auto w = twiddles(n);
  GFunc out(plane);
  std::vector<Cplx> windowed(static_cast<std::size_t>(n));
  for (std::int64_t x = 0; x < n; ++x) {
    for (std::int64_t y = 0; y < n; ++y)
      windowed[static_cast<std::size_t>(y)] = f[y] * std::conj(h[mod(y - x, n)]);
    // V(x, s) = sum_y windowed(y) e^{-2 pi i s y / n}
    for (std::int64_t s = 0; s < n; ++s) {
      Cplx acc = 0.0;
      for (std::int64_t y = 0; y < n; ++y)
        acc += windowed[static_cast<std::size_t>(y)] * w[static_cast<std::size_t>(mod(s * y, n))];
      if (acc != Cplx(0.0)) out.set(elem(x, s), acc);
    }
  }
  return out;
}

Eigen::VectorXcd stft_adjoint(const GFunc& f_plane, const Eigen::VectorXcd& h) {
  const std::int64_t n = h.size();
  const Group& plane = f_plane.group();
  if (plane.kind() != Group::Kind::cyclic || plane.dim() != 2 || plane.modulus() != n)
    throw std::invalid_argument("stft_adjoint: plane carrier does not match the window length");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
  auto w = twiddles(n);
  for (const auto& [xs, val] : f_plane.values()) {
    std::int64_t x = xs.c[0], s = xs.c[1];
    for (std::int64_t y = 0; y < n; ++y) {
      // conj of the analysis twiddle: e^{+2 pi i s y / n}
      out[y] += val * std::conj(w[static_cast<std::size_t>(mod(s * y, n))]) * h[mod(y - x, n)];
    }
  }
  return out;
}

GFunc stft_isometric(const Eigen::VectorXcd& f, const Eigen::VectorXcd& h) {
  double scale = 1.0 / (std::sqrt(static_cast<double>(f.size())) * h.norm());
  return scaled(stft(f, h), scale);
}

Eigen::VectorXcd stft_isometric_adjoint(const GFunc& f_plane, const Eigen::VectorXcd& h) {
  double scale = 1.0 / (std::sqrt(static_cast<double>(h.size())) * h.norm());
  return scale * stft_adjoint(f_plane, h);
}

Eigen::VectorXcd canonical_dual_window(const Eigen::VectorXcd& h, std::int64_t a,
                                       std::int64_t b, double* frame_lower,
                                       double* frame_upper) {
  const std::int64_t n = h.size();
  if (a < 1 || b < 1 || n % a != 0 || n % b != 0)
    throw std::invalid_argument("canonical_dual_window: lattice steps must divide n");
  Eigen::MatrixXcd frame_op = Eigen::MatrixXcd::Zero(n, n);
  for (std::int64_t x = 0; x < n; x += a) {
    for (std::int64_t s = 0; s < n; s += b) {
      Eigen::VectorXcd atom = tf_shift(h, x, s);
      frame_op.noalias() += atom * atom.adjoint();
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(frame_op);
  double lo = eig.eigenvalues().minCoeff();
  double hi = eig.eigenvalues().maxCoeff();
  if (frame_lower) *frame_lower = lo;
  if (frame_upper) *frame_upper = hi;
  if (!(lo > 1e-10 * hi))
    throw NumericError("canonical_dual_window: the lattice shifts of this window are not a frame");
  Eigen::VectorXd inv = eig.eigenvalues().cwiseInverse();
  return eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().adjoint() * h;
}

Eigen::VectorXcd localization_operator(const Eigen::VectorXcd& h, const GFunc& mask,
                                       const Eigen::VectorXcd& f) {
  Eigen::VectorXcd hn = h / h.norm();
  GFunc analyzed = stft_isometric(f, hn);
  return stft_isometric_adjoint(pointwise_mul(mask, analyzed), hn);
}

std::pair<std::int64_t, std::int64_t> default_gabor_lattice(std::int64_t n) {
  std::int64_t best = 1;
  for (std::int64_t a = 1; a * a * 2 <= n; ++a) {
    if (n % a == 0) best = std::max(best, a);
  }
  return {best, best};
}

GaborSystem make_gabor_system(std::int64_t n, std::int64_t a, std::int64_t b,
                              Eigen::VectorXcd window, const Neighborhood& v) {
  if (a < 1 || b < 1 || n % a != 0 || n % b != 0)
    throw std::invalid_argument("make_gabor_system: lattice steps must divide n");
  double lo = 0, hi = 0;
  Eigen::VectorXcd dual = canonical_dual_window(window, a, b, &lo, &hi);
  Group plane = Group::cyclic(2, n);

  // The transform of a shifted window is a phase-twisted translate of the
  // base transform:
  //   V(M_s T_x f)(y, xi) = e^{-2 pi i (xi - s) x / n} (V f)(y - x, xi - s).
  // Building every atom from the base transform keeps that relation exact,
  // so the moduli really are translates of |V window| and |V dual|.
  GFunc base = stft_isometric(window, window);
  GFunc base_dual = stft_isometric(dual, window);
  auto w = twiddles(n);
  auto shifted = [&](const GFunc& f, std::int64_t x, std::int64_t s) {
    GFunc out(plane);
    for (const auto& [u, val] : f.values()) {
      Cplx phase = w[static_cast<std::size_t>(mod(u.c[1] * x, n))];
      out.set(elem(x + u.c[0], s + u.c[1]), phase * val);
    }
    return out;
  };

  std::vector<Elem> node_points;
  std::vector<GFunc> atoms, duals;
  for (std::int64_t x = 0; x < n; x += a) {
    for (std::int64_t s = 0; s < n; s += b) {
      node_points.push_back(elem(x, s));
      atoms.push_back(shifted(base, x, s));
      duals.push_back(shifted(base_dual, x, s));
    }
  }
  RelSepSet nodes(plane, std::move(node_points), v);
  // Shared envelope: |transform of the window| + |transform of its dual|,
  // lifted to the realized atom moduli. The lift only moves values by the
  // rounding of the phase twist, which matters at plane corners where the
  // dual transform carries no spare mass.
  GFunc env = add(abs_fn(base), abs_fn(base_dual));
  GFunc realized = tightest_envelope(plane, nodes, atoms, duals);
  for (const auto& [x, val] : realized.values()) {
    if (val.real() > env.at(x).real()) env.set(x, val);
  }
  MoleculeSystem sys(plane, std::move(nodes), std::move(atoms), std::move(duals),
                     std::move(env), /*canonical_dual=*/true);
  sys.mark_envelope_verified(verify_envelope(sys).ok);
  return GaborSystem{n, a, b, std::move(window), std::move(dual), lo, hi, plane,
                     std::move(sys)};
}

GaborSystem make_gabor_system(std::int64_t n, std::int64_t a, std::int64_t b,
                              Eigen::VectorXcd window) {
  return make_gabor_system(n, a, b, std::move(window),
                           Neighborhood::box(Group::cyclic(2, n), 1));
}

std::vector<HarnessRow> modulation_norm_harness(const Eigen::VectorXcd& h,
                                                const PartitionOfUnity& theta,
                                                std::span<const HarnessExponents> combos,
                                                const Weight& v, int trials,
                                                std::uint64_t seed) {
  const std::int64_t n = h.size();
  const Group& plane = theta.group;
  if (plane.kind() != Group::Kind::cyclic || plane.dim() != 2 || plane.modulus() != n)
    throw std::invalid_argument("modulation_norm_harness: partition carrier mismatch");
  if (!(theta.sum_lower > 0))
    throw NumericError("modulation_norm_harness: partition sum must be bounded below by A > 0");

  // Product structure of the centers.
  std::set<std::int64_t> times, freqs;
  std::set<Elem> centers(theta.centers.points().begin(), theta.centers.points().end());
  for (const Elem& c : theta.centers.points()) {
    times.insert(c.c[0]);
    freqs.insert(c.c[1]);
  }
  if (times.size() * freqs.size() != centers.size())
    throw std::invalid_argument("modulation_norm_harness: centers must form a product grid");
  for (std::int64_t t : times)
    for (std::int64_t s : freqs)
      if (!centers.count(elem(t, s)))
        throw std::invalid_argument("modulation_norm_harness: centers must form a product grid");

  Eigen::VectorXcd hn = h / h.norm();
  Weight unweighted = Weight::one(plane);

  Rng rng(seed);
  std::vector<Eigen::VectorXcd> fs;
  fs.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXcd f(n);
    for (std::int64_t i = 0; i < n; ++i) f[i] = rng.cnormal();
    fs.push_back(std::move(f));
  }

  // Localized pieces and their transforms are shared across exponent combos.
  std::vector<GFunc> trial_transforms;
  std::vector<std::vector<GFunc>> piece_transforms(fs.size());
  for (std::size_t t = 0; t < fs.size(); ++t) {
    trial_transforms.push_back(stft_isometric(fs[t], hn));
    piece_transforms[t].reserve(theta.functions.size());
    for (const GFunc& th : theta.functions) {
      Eigen::VectorXcd piece = localization_operator(h, th, fs[t]);
      piece_transforms[t].push_back(stft_isometric(piece, hn));
    }
  }

  std::vector<HarnessRow> rows;
  for (const HarnessExponents& ex : combos) {
    SolidSpaceSpec lhs_space = SolidSpaceSpec::mixed(plane, ex.p, ex.q, 1, v, Weight::one(plane));
    SolidSpaceSpec piece_space =
        SolidSpaceSpec::mixed(plane, ex.s, ex.t, 1, unweighted, Weight::one(plane));
    HarnessRow row;
    row.p = ex.p;
    row.q = ex.q;
    row.s = ex.s;
    row.t = ex.t;
    row.c_min = kInf;
    row.c_max = 0;
    for (std::size_t t = 0; t < fs.size(); ++t) {
      double lhs = space_norm(trial_transforms[t], lhs_space);
      if (lhs == 0.0) continue;
      // Outer q over frequency centers, inner p over time centers, each piece
      // weighted by v at its center.
      double outer = 0;
      bool outer_sup = ex.q == kInf;
      std::vector<double> inner_norms;
      for (std::int64_t fr : freqs) {
        double inner = 0;
        bool inner_sup = ex.p == kInf;
        for (std::int64_t ti : times) {
          std::int64_t ci = theta.centers.index_of(elem(ti, fr));
          double mst = space_norm(piece_transforms[t][static_cast<std::size_t>(ci)], piece_space);
          double term = mst * v(elem(ti, fr));
          if (inner_sup) {
            inner = std::max(inner, term);
          } else {
            inner += std::pow(term, ex.p);
          }
        }
        if (!inner_sup) inner = std::pow(inner, 1.0 / ex.p);
        if (outer_sup) {
          outer = std::max(outer, inner);
        } else {
          outer += std::pow(inner, ex.q);
        }
      }
      if (!outer_sup) outer = std::pow(outer, 1.0 / ex.q);
      double ratio = outer / lhs;
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

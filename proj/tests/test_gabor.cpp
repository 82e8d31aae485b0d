#include <filesystem>

#include "doctest.h"
#include "oracles.hpp"
#include "phasecover/errors.hpp"
#include "phasecover/gabor.hpp"
#include "phasecover/localized.hpp"
#include "phasecover/serialize.hpp"

using namespace phasecover;

namespace {

Eigen::VectorXcd random_signal(std::int64_t n, Rng& rng) {
  Eigen::VectorXcd f(n);
  for (std::int64_t i = 0; i < n; ++i) f[i] = rng.cnormal();
  return f;
}

}  // namespace

TEST_CASE("time-frequency shifts: identity, periodicity, commutation phase") {
  Eigen::VectorXcd h = gaussian_window(16);
  CHECK((tf_shift(h, 0, 0) - h).norm() == 0.0);
  CHECK((tf_shift(h, 16, 0) - h).norm() < 1e-14);
  CHECK(tf_shift(h, 3, 5).norm() == doctest::Approx(h.norm()));

  // M_s T_x = phase * T_x M_s with phase e^{2 pi i x s / n}.
  std::int64_t x = 3, s = 5, n = 16;
  Eigen::VectorXcd lhs = tf_shift(h, x, s);
  Eigen::VectorXcd mh(n);
  for (std::int64_t y = 0; y < n; ++y) {
    double a = 2.0 * 3.14159265358979323846 * static_cast<double>(s * y) /
               static_cast<double>(n);
    mh[y] = Cplx(std::cos(a), std::sin(a)) * h[y];
  }
  Eigen::VectorXcd rhs(n);
  for (std::int64_t y = 0; y < n; ++y) rhs[y] = mh[(y - x % n + n) % n];
  double a = 2.0 * 3.14159265358979323846 * static_cast<double>(x * s) /
             static_cast<double>(n);
  rhs *= Cplx(std::cos(a), std::sin(a));
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("transform of a point signal with a point window") {
  Group plane = Group::cyclic(2, 4);
  Eigen::VectorXcd d0 = Eigen::VectorXcd::Zero(4);
  d0[0] = 1.0;
  GFunc v = stft(d0, d0);
  for (std::int64_t x = 0; x < 4; ++x) {
    for (std::int64_t s = 0; s < 4; ++s) {
      CHECK(std::abs(v.at(elem(x, s)) - Cplx(x == 0 ? 1.0 : 0.0)) < 1e-14);
    }
  }
  Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(4);
  CHECK_THROWS_AS(stft(d0, zero), std::invalid_argument);
}

TEST_CASE("energy identity and injectivity of the full-lattice transform") {
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    Eigen::VectorXcd f = random_signal(16, rng);
    Eigen::VectorXcd h = random_signal(16, rng);
    GFunc v = stft(f, h);
    double lhs = 0;
    for (const auto& [x, val] : v.values()) lhs += std::norm(val);
    double rhs = 16.0 * h.squaredNorm() * f.squaredNorm();
    CHECK(std::abs(lhs - rhs) / rhs < 1e-10);
    CHECK(lhs > 0);
  }
}

TEST_CASE("transform magnitudes are shift covariant") {
  Rng rng(5);
  Eigen::VectorXcd f = random_signal(16, rng);
  Eigen::VectorXcd h = gaussian_window(16);
  GFunc base = stft(f, h);
  GFunc moved = stft(tf_shift(f, 3, 5), h);
  Group plane = Group::cyclic(2, 16);
  double worst = 0;
  for (const Elem& z : plane.all_elements()) {
    worst = std::max(worst, std::abs(std::abs(moved.at(z)) -
                                     std::abs(base.at(plane.op(z, plane.inverse(elem(3, 5)))))));
  }
  CHECK(worst < 1e-12 * sup_abs(base));
}

TEST_CASE("canonical dual windows: full lattice closed form and reconstruction") {
  Eigen::VectorXcd h = gaussian_window(16);
  // Full lattice: the frame operator is n|h|^2 times the identity.
  double lo = 0, hi = 0;
  Eigen::VectorXcd dual = canonical_dual_window(h, 1, 1, &lo, &hi);
  Eigen::VectorXcd expected = h / (16.0 * h.squaredNorm());
  CHECK((dual - expected).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(lo == doctest::Approx(hi).epsilon(1e-10));  // tight frame
  CHECK(lo == doctest::Approx(16.0 * h.squaredNorm()));

  // Oversampled lattice: reconstruction on a basis.
  Eigen::VectorXcd d16 = canonical_dual_window(h, 2, 2, &lo, &hi);
  CHECK(lo > 0);
  for (std::int64_t basis = 0; basis < 16; ++basis) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(16);
    e[basis] = 1.0;
    Eigen::VectorXcd rebuilt = Eigen::VectorXcd::Zero(16);
    for (std::int64_t x = 0; x < 16; x += 2) {
      for (std::int64_t s = 0; s < 16; s += 2) {
        Eigen::VectorXcd atom = tf_shift(h, x, s);
        Eigen::VectorXcd datom = tf_shift(d16, x, s);
        rebuilt += datom.dot(e) * atom;
      }
    }
    CHECK((rebuilt - e).cwiseAbs().maxCoeff() < 1e-10);
  }

  // A window whose lattice shifts cannot span the space is rejected.
  Eigen::VectorXcd sparse = Eigen::VectorXcd::Zero(4);
  sparse[0] = 1.0;
  CHECK_THROWS_AS(canonical_dual_window(sparse, 2, 1), NumericError);
}

TEST_CASE("localization operators: resolution of identity, vanishing, spectrum") {
  std::int64_t n = 16;
  Group plane = Group::cyclic(2, n);
  auto window = plane.all_elements();
  Eigen::VectorXcd h = gaussian_window(n);
  Rng rng(7);
  Eigen::VectorXcd f = random_signal(n, rng);

  GFunc one = constant_mask(plane, window, 1.0);
  CHECK((localization_operator(h, one, f) - f).cwiseAbs().maxCoeff() < 1e-12 * f.norm());

  GFunc zero(plane);
  CHECK(localization_operator(h, zero, f).norm() == 0.0);

  GFunc half = half_plane_mask(plane, window);
  Eigen::MatrixXcd op(n, n);
  for (std::int64_t j = 0; j < n; ++j) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
    e[j] = 1.0;
    op.col(j) = localization_operator(h, half, e);
  }
  CHECK(op_norm_bound(Eigen::MatrixXcd(op - op.adjoint())) < 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(op);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
  CHECK(eig.eigenvalues().maxCoeff() <= 1.0 + 1e-10);
}

TEST_CASE("derived systems: envelope, orthogonal projector at full lattice") {
  GaborSystem gs = make_gabor_system(8, 1, 1, gaussian_window(8));
  CHECK(gs.system.envelope_verified());
  CHECK(verify_envelope(gs.system).ok);
  CHECK(gs.system.canonical_dual());
  CHECK(gs.system.span_rank() == 8);

  // The stored envelope is the sum of the two base-transform moduli, up to
  // the rounding-scale lift at the corners (checked here across sizes).
  for (std::int64_t n : {8, 16, 32}) {
    GaborSystem g2 = make_gabor_system(n, 2, 2, gaussian_window(n));
    CHECK(g2.system.envelope_verified());
    GFunc paper_env = add(abs_fn(stft_isometric(g2.window, g2.window)),
                          abs_fn(stft_isometric(g2.dual_window, g2.window)));
    double worst = 0;
    for (const auto& [x, val] : g2.system.envelope().values()) {
      double ref = paper_env.at(x).real();
      worst = std::max(worst, std::abs(val.real() - ref) / ref);
    }
    CHECK(worst < 1e-12);
  }

  // The projector matrix is the orthogonal projector onto the range of the
  // isometric transform.
  const Universe& u = gs.system.universe();
  Eigen::MatrixXcd viso(u.size(), 8);
  for (std::int64_t j = 0; j < 8; ++j) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(8);
    e[j] = 1.0;
    viso.col(j) = to_dense(u, stft_isometric(e, gs.window));
  }
  Eigen::MatrixXcd q = viso * viso.adjoint();  // V V* for isometric V
  CHECK(op_norm_bound(Eigen::MatrixXcd(gs.system.projector_matrix() - q)) < 1e-10);
  const Eigen::MatrixXcd& p = gs.system.projector_matrix();
  CHECK(op_norm_bound(Eigen::MatrixXcd(p * p - p)) < 1e-10);
  CHECK(op_norm_bound(Eigen::MatrixXcd(p - p.adjoint())) < 1e-10);
}

TEST_CASE("modulation norm harness agrees with the generic report route per trial") {
  const std::int64_t n = 8;
  Group plane = Group::cyclic(2, n);
  Eigen::VectorXcd h = gaussian_window(n);
  GaborSystem gs = make_gabor_system(n, 1, 1, h);

  std::vector<Elem> centers;
  for (std::int64_t x = 0; x < n; x += 4)
    for (std::int64_t s = 0; s < n; s += 4) centers.push_back(elem(x, s));
  PartitionOfUnity theta = build_bupu(plane, centers, BupuProfile::raised_cosine, 8.0,
                                      Neighborhood::box(plane, 1));
  REQUIRE(theta.exact_partition);

  Weight v_one = Weight::one(plane);
  std::vector<HarnessExponents> combos = {{2, 2, 2, 2}};
  const int trials = 8;
  const std::uint64_t seed = 0x5EED;
  auto rows = modulation_norm_harness(h, theta, combos, v_one, trials, seed);
  REQUIRE(rows.size() == 1);
  REQUIRE(rows[0].trial_count == trials);

  // Rebuild the same trial signals (the generator stream is pinned) and
  // evaluate the generic equivalence ratio with the point neighborhood, where
  // the discrete-space norm is the plain weighted sequence norm.
  Rng rng(seed);
  Neighborhood ve(plane, {elem(0, 0)});
  SolidSpaceSpec e22 = SolidSpaceSpec::mixed(plane, 2, 2, 1, v_one, v_one);
  SolidSpaceSpec b22 = SolidSpaceSpec::lp(plane, 2, v_one, v_one);
  RelSepSet gamma(plane, centers, ve);
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXcd f = random_signal(n, rng);
    GFunc transform = stft_isometric(f, h / h.norm());
    double lhs = space_norm(transform, e22);
    DiscreteCoeffs piece_norms{gamma, {}};
    for (const GFunc& th : theta.functions) {
      GFunc piece = projector(gs.system, pointwise_mul(th, transform));
      piece_norms.values.push_back(space_norm(piece, b22));
    }
    double rhs = ed_norm(piece_norms, e22, ve);
    double generic_ratio = rhs / lhs;
    CHECK(std::abs(generic_ratio - rows[0].ratios[static_cast<std::size_t>(t)]) < 1e-10);
  }

  // Exponent sweep stays within a uniform band.
  std::vector<HarnessExponents> sweep;
  for (double p : {1.0, 2.0, kInf})
    for (double q : {1.0, 2.0, kInf}) sweep.push_back({p, q, 2, 2});
  auto sweep_rows = modulation_norm_harness(h, theta, sweep, v_one, 20, seed);
  double smin = kInf, smax = 0;
  for (const HarnessRow& row : sweep_rows) {
    CHECK(row.c_min > 0);
    CHECK(std::isfinite(row.c_max));
    smin = std::min(smin, row.c_max / row.c_min);
    smax = std::max(smax, row.c_max / row.c_min);
  }
  MESSAGE("harness spread band over (p,q) sweep: [", smin, ", ", smax, "]");
  CHECK(smax / smin <= 4.0);
}

TEST_CASE("harness validates its partition and center grid") {
  const std::int64_t n = 8;
  Group plane = Group::cyclic(2, n);
  Eigen::VectorXcd h = gaussian_window(n);
  Weight v_one = Weight::one(plane);
  std::vector<HarnessExponents> combos = {{2, 2, 2, 2}};

  // Non-product centers are rejected.
  std::vector<Elem> bent = {elem(0, 0), elem(4, 4)};
  PartitionOfUnity pu = build_bupu(plane, bent, BupuProfile::gaussian_normalized, 4.0,
                                   Neighborhood::box(plane, 1));
  CHECK_THROWS_AS(modulation_norm_harness(h, pu, combos, v_one, 2, 1),
                  std::invalid_argument);
}

TEST_CASE("exponentially localized frames: construction and multipliers") {
  LocalizedFrame frame = make_exponential_frame(8, 0.5, 0.2, 7);
  const std::int64_t n = 2 * 8 + 1;
  CHECK(frame.vectors.cols() == n);
  CHECK(frame.frame_lower > 0);
  CHECK(frame.frame_upper >= frame.frame_lower);

  // The Gramian decays along diagonals at the declared rate.
  for (std::size_t d = 2; d < frame.decay_profile.size(); ++d) {
    CHECK(frame.decay_profile[d] <=
          1e-9 + 3.0 * 0.2 * std::exp(-0.5 * static_cast<double>(d - 1)));
  }

  Rng rng(9);
  Eigen::VectorXcd f(n);
  for (std::int64_t i = 0; i < n; ++i) f[i] = rng.cnormal();

  std::vector<Cplx> ones(static_cast<std::size_t>(n), Cplx(1.0));
  CHECK((frame_multiplier(frame, ones, f) - f).cwiseAbs().maxCoeff() < 1e-10 * f.norm());

  std::vector<Cplx> pick(static_cast<std::size_t>(n), Cplx(0.0));
  pick[3] = 1.0;
  Eigen::VectorXcd rank_one = frame_multiplier(frame, pick, f);
  Cplx coeff = frame.vectors.col(3).dot(f);
  CHECK((rank_one - coeff * frame.duals.col(3)).cwiseAbs().maxCoeff() < 1e-10 * f.norm());
}

TEST_CASE("localized frames drive the multiplier machinery on the lattice") {
  LocalizedFrame frame = make_exponential_frame(16, 0.5, 0.2, 7);
  Neighborhood v = Neighborhood::box(Group::lattice(1), 1);
  MoleculeSystem sys = to_molecule_system(frame, v);
  CHECK(sys.envelope_verified());
  CHECK(sys.canonical_dual());

  // The Gramian is convolution-dominated with a summable weighted profile,
  // and that mass controls the operator norm (cross-module check).
  Group z = sys.group();
  Weight w = Weight::polynomial(z, 1.0);
  Eigen::MatrixXcd gram = frame.vectors.adjoint() * frame.vectors;
  CdNorm cd = cd_norm(gram, sys.nodes(), w, Side::right);
  CHECK(std::isfinite(cd.norm));
  CHECK(op_norm(gram) <= cd.norm + 1e-9);

  // Positive-bounded masks invert through the gram pseudo-inverse route.
  auto window = sys.universe().points();
  GFunc mvals(z);
  for (const Elem& x : window)
    mvals.set(x, 0.6 + 0.3 * std::cos(0.37 * static_cast<double>(x.c[0])));
  SymbolMask mask = SymbolMask::analyze(std::move(mvals), window);
  REQUIRE(mask.positive_bounded);
  GramMatrix gm = gram_matrix(sys, mask, w);
  Rng rng(11);
  std::vector<Cplx> c(sys.count());
  for (Cplx& ci : c) ci = rng.cnormal();
  GFunc f = synthesis(sys, c);
  GFunc round = phase_multiplier(sys, mask, inverse_phase_multiplier(sys, gm, mask, f));
  CHECK(oracles::max_abs_diff(round, f) < 1e-8 * std::max(1.0, sup_abs(f)));
}

TEST_CASE("signal files round trip through the binary format with a sidecar") {
  Rng rng(13);
  Eigen::VectorXcd f = random_signal(16, rng);
  auto dir = std::filesystem::temp_directory_path() / "phasecover-test-signals";
  std::filesystem::create_directories(dir);
  std::string path = (dir / "sig.bin").string();
  write_signal(path, f);
  Eigen::VectorXcd back = read_signal(path);
  REQUIRE(back.size() == f.size());
  CHECK((back - f).cwiseAbs().maxCoeff() == 0.0);  // bit-exact payload

  SignalSidecar meta{16, 2, 2, "gaussian"};
  write_signal_sidecar((dir / "sig.json").string(), meta);
  SignalSidecar got = read_signal_sidecar((dir / "sig.json").string());
  CHECK(got.n == 16);
  CHECK(got.a == 2);
  CHECK(got.b == 2);
  CHECK(got.window_family == "gaussian");
  std::filesystem::remove_all(dir);
}

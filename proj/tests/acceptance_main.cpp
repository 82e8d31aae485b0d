// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Everything runs at desk scale with pinned tolerances.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "phasecover/experiment.hpp"
#include "phasecover/gabor.hpp"
#include "phasecover/localized.hpp"
#include "phasecover/rng.hpp"
#include "phasecover/serialize.hpp"

using namespace phasecover;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
  if (!pass) ++g_failures;
}

std::string fmt(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

PartitionOfUnity plane_partition(const Group& plane, std::int64_t step, double width) {
  std::vector<Elem> centers;
  for (std::int64_t x = 0; x < plane.modulus(); x += step)
    for (std::int64_t s = 0; s < plane.modulus(); s += step) centers.push_back(elem(x, s));
  return build_bupu(plane, centers, BupuProfile::raised_cosine, width,
                    Neighborhood::box(plane, 1));
}

// Probe vectors in the span, expressed in the orthonormal span basis.
std::vector<Eigen::VectorXcd> span_probes(const MoleculeSystem& sys, int count,
                                          std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Eigen::VectorXcd> probes;
  for (int t = 0; t < count; ++t) {
    Eigen::VectorXcd c(static_cast<std::int64_t>(sys.count()));
    for (std::int64_t i = 0; i < c.size(); ++i) c[i] = rng.cnormal();
    Eigen::VectorXcd fb = sys.span_basis().adjoint() * (sys.atom_matrix() * c);
    if (fb.norm() > 0) probes.push_back(std::move(fb));
  }
  return probes;
}

double probe_error(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                   const std::vector<Eigen::VectorXcd>& probes) {
  Eigen::MatrixXcd diff = a - b;
  double worst = 0;
  for (const Eigen::VectorXcd& fb : probes)
    worst = std::max(worst, (diff * fb).norm() / fb.norm());
  return worst;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion_1_projector(const GaborSystem& gs16, const KernelEnvelope& ke16) {
  const Eigen::MatrixXcd& p = gs16.system.projector_matrix();
  double idem = op_norm_bound(Eigen::MatrixXcd(p * p - p));
  double selfadj = op_norm_bound(Eigen::MatrixXcd(p - p.adjoint()));
  DominationReport dom = check_domination(gs16.system, ke16, 100, kDefaultTrialSeed);
  bool pass = idem <= 1e-10 && selfadj <= 1e-10 && dom.worst_excess <= 1e-12;
  report(1, pass,
         "projector idempotent " + fmt(idem) + ", self-adjoint " + fmt(selfadj) +
             " (tol 1e-10); domination excess " + fmt(dom.worst_excess) +
             " over 100 inputs (tol 1e-12)");
}

void criterion_2_certificate(const CoverCertificate& cert) {
  bool monotone = true;
  for (std::size_t i = 1; i < cert.rows.size(); ++i) {
    if (cert.rows[i].theory_bound > cert.rows[i - 1].theory_bound) monotone = false;
  }
  double final_bound = cert.rows.back().theory_bound;
  bool controlled = true;
  for (const CertificateRow& row : cert.rows) {
    if (row.empirical_opnorm > std::max(10.0 * row.theory_bound, 1e-12)) controlled = false;
  }
  bool pass = monotone && final_bound <= 1e-6 && controlled;
  std::string detail = "bounds";
  for (const CertificateRow& row : cert.rows)
    detail += " r" + std::to_string(row.u_radius) + "=" + fmt(row.theory_bound);
  detail += std::string(monotone ? ", monotone" : ", NOT monotone") +
            ", final <= 1e-6: " + (final_bound <= 1e-6 ? "yes" : "no") +
            ", empirical within 10x: " + (controlled ? "yes" : "no");
  report(2, pass, detail);
}

void criterion_3_multiplier_approx(const GaborSystem& gs32, const PartitionOfUnity& pu32) {
  auto window = gs32.plane.all_elements();
  SymbolMask one = SymbolMask::analyze(constant_mask(gs32.plane, window, 1.0), window);
  SymbolMask half = SymbolMask::analyze(half_plane_mask(gs32.plane, window), window);
  auto probes = span_probes(gs32.system, 100, kDefaultTrialSeed);
  CoverWindow final_u{gs32.plane, 16};
  Eigen::MatrixXcd m1 = phase_multiplier_matrix(gs32.system, one);
  Eigen::MatrixXcd mh = phase_multiplier_matrix(gs32.system, half);
  double err_one = probe_error(
      windowed_phase_multiplier_matrix(gs32.system, pu32, one, final_u), m1, probes);
  double err_half = probe_error(
      windowed_phase_multiplier_matrix(gs32.system, pu32, half, final_u), mh, probes);
  bool pass = err_half <= 1e-3 && err_half <= 1.5 * err_one;
  report(3, pass,
         "half-plane windowed-multiplier error " + fmt(err_half) + " (tol 1e-3), identity " +
             fmt(err_one) + ", ratio within 1.5x: " + (err_half <= 1.5 * err_one ? "yes" : "no"));
}

std::vector<EquivalenceRow> equivalence_rows(const GaborSystem& gs16,
                                             const PartitionOfUnity& pu16,
                                             const SymbolMask* theta) {
  const Group& plane = gs16.plane;
  Weight w = Weight::one(plane);
  std::vector<SolidSpaceSpec> environments;
  for (double p : {1.0, 2.0, kInf})
    environments.push_back(SolidSpaceSpec::lp(plane, p, Weight::one(plane), w));
  SolidSpaceSpec b2 = SolidSpaceSpec::lp(plane, 2, Weight::one(plane), w);
  return norm_equivalence_report(gs16.system, pu16, environments, b2, theta, 100,
                                 kDefaultTrialSeed, Neighborhood::box(plane, 1));
}

bool equivalence_bounds_hold(const std::vector<EquivalenceRow>& rows, std::string* detail) {
  bool pass = true;
  std::vector<double> spreads;
  for (const EquivalenceRow& row : rows) {
    bool row_ok = row.c_min > 0 && row.c_max >= row.c_min && std::isfinite(row.c_max) &&
                  row.spread() <= 10.0;
    pass = pass && row_ok;
    spreads.push_back(row.spread());
    *detail += " " + row.space + ": spread " + fmt(row.spread()) + ";";
  }
  double smin = *std::min_element(spreads.begin(), spreads.end());
  double smax = *std::max_element(spreads.begin(), spreads.end());
  *detail += " cross-space factor " + fmt(smax / smin);
  return pass && smax / smin <= 4.0;
}

void criterion_4_equivalence(const GaborSystem& gs16, const PartitionOfUnity& pu16) {
  std::string detail = "ratios over 100 trials:";
  bool pass = equivalence_bounds_hold(equivalence_rows(gs16, pu16, nullptr), &detail);
  report(4, pass, detail);
}

void criterion_5_scaled_families(const GaborSystem& gs16, const PartitionOfUnity& pu16) {
  const Group& plane = gs16.plane;
  auto window = plane.all_elements();
  Weight w = Weight::one(plane);
  SymbolMask mask = SymbolMask::analyze(cosine_mask(plane, window, 0.6, 0.3), window);
  GramMatrix gram = gram_matrix(gs16.system, mask, w);
  double gap_floor = 0.3 * gram.sigma_max * (mask.lower / mask.upper);
  bool gap_ok = gram.spectral_gap >= gap_floor;

  Eigen::MatrixXcd mm = phase_multiplier_matrix(gs16.system, mask);
  Eigen::MatrixXcd nm = inverse_phase_multiplier_matrix(gs16.system, gram, mask);
  double round_trip = op_norm(Eigen::MatrixXcd(
      nm * mm - Eigen::MatrixXcd::Identity(mm.rows(), mm.cols())));
  bool inverse_ok = round_trip <= 1e-8;

  std::string detail = "gram gap " + fmt(gram.spectral_gap) + " >= " + fmt(gap_floor) +
                       (gap_ok ? " yes" : " NO") + "; inverse round-trip " + fmt(round_trip) +
                       " (tol 1e-8); scaled-family";
  bool eq_ok = equivalence_bounds_hold(equivalence_rows(gs16, pu16, &mask), &detail);
  report(5, gap_ok && inverse_ok && eq_ok, detail);
}

void criterion_6_counterexample() {
  Neighborhood v = Neighborhood::box(Group::cyclic(1, 8), 1);
  MoleculeSystem blocks = block_system(8, 2, v);
  const Group& z8 = blocks.group();
  auto window = z8.all_elements();
  Weight w = Weight::one(z8);
  SymbolMask sign = SymbolMask::analyze(sign_split_mask(z8, window, elem(1)), window);
  Eigen::MatrixXcd m = phase_multiplier_matrix(blocks, sign);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  double smin = svd.singularValues().minCoeff();
  bool refused = false;
  try {
    GramMatrix gram = gram_matrix(blocks, sign, w);
    inverse_phase_multiplier(blocks, gram, sign, blocks.atoms()[0]);
  } catch (const NumericError&) {
    refused = true;
  }
  bool pass = smin <= 1e-10 && refused;
  report(6, pass,
         "sign-split symbol: sigma_min " + fmt(smin) + " (tol 1e-10), inversion refused: " +
             (refused ? "yes" : "NO"));
}

void criterion_7_harness_oracle() {
  const std::int64_t n = 8;
  Group plane = Group::cyclic(2, n);
  Eigen::VectorXcd h = gaussian_window(n);
  GaborSystem gs = make_gabor_system(n, 1, 1, h);
  std::vector<Elem> centers;
  for (std::int64_t x = 0; x < n; x += 4)
    for (std::int64_t s = 0; s < n; s += 4) centers.push_back(elem(x, s));
  PartitionOfUnity theta = build_bupu(plane, centers, BupuProfile::raised_cosine, 8.0,
                                      Neighborhood::box(plane, 1));
  Weight v_one = Weight::one(plane);
  const int trials = 100;
  std::vector<HarnessExponents> combos = {{2, 2, 2, 2}};
  auto rows = modulation_norm_harness(h, theta, combos, v_one, trials, kDefaultTrialSeed);

  // Generic pathway with the point neighborhood, same trial stream.
  Rng rng(kDefaultTrialSeed);
  Neighborhood ve(plane, {elem(0, 0)});
  SolidSpaceSpec e22 = SolidSpaceSpec::mixed(plane, 2, 2, 1, v_one, v_one);
  SolidSpaceSpec b22 = SolidSpaceSpec::lp(plane, 2, v_one, v_one);
  RelSepSet gamma(plane, centers, ve);
  double worst = 0;
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXcd f(n);
    for (std::int64_t i = 0; i < n; ++i) f[i] = rng.cnormal();
    GFunc transform = stft_isometric(f, h / h.norm());
    double lhs = space_norm(transform, e22);
    DiscreteCoeffs piece_norms{gamma, {}};
    for (const GFunc& th : theta.functions) {
      piece_norms.values.push_back(
          space_norm(projector(gs.system, pointwise_mul(th, transform)), b22));
    }
    double generic = ed_norm(piece_norms, e22, ve) / lhs;
    worst = std::max(worst, std::abs(generic - rows[0].ratios[static_cast<std::size_t>(t)]));
  }
  report(7, worst <= 1e-10,
         "harness vs generic-report ratios differ by " + fmt(worst) +
             " across 100 trials (tol 1e-10)");
}

void criterion_8_algebra() {
  Group z8 = Group::cyclic(1, 8);
  Neighborhood v = Neighborhood::box(z8, 1);
  RelSepSet nodes(z8, z8.all_elements(), v);
  Weight w = Weight::polynomial(z8, 0.5);
  Rng rng(kDefaultTrialSeed);
  bool submult = true, dominates = true;
  for (int t = 0; t < 50; ++t) {
    Eigen::MatrixXcd a(8, 8), b(8, 8);
    for (std::int64_t i = 0; i < 8; ++i) {
      for (std::int64_t j = 0; j < 8; ++j) {
        double dist = z8.norm(z8.op(z8.inverse(nodes.points()[static_cast<std::size_t>(j)]),
                                    nodes.points()[static_cast<std::size_t>(i)]));
        a(i, j) = rng.cnormal() * std::exp(-0.4 * dist);
        b(i, j) = rng.cnormal() * std::exp(-0.4 * dist);
      }
    }
    double na = cd_norm(a, nodes, w, Side::right).norm;
    double nb = cd_norm(b, nodes, w, Side::right).norm;
    double nab = cd_norm(Eigen::MatrixXcd(a * b), nodes, w, Side::right).norm;
    if (!(nab <= na * nb)) submult = false;
    if (!(op_norm(a) <= na && op_norm(b) <= nb)) dominates = false;
  }

  double moyal_worst = 0;
  for (int t = 0; t < 50; ++t) {
    Eigen::VectorXcd f(16), h(16);
    for (std::int64_t i = 0; i < 16; ++i) {
      f[i] = rng.cnormal();
      h[i] = rng.cnormal();
    }
    GFunc vf = stft(f, h);
    double lhs = 0;
    for (const auto& [x, val] : vf.values()) lhs += std::norm(val);
    double rhs = 16.0 * h.squaredNorm() * f.squaredNorm();
    moyal_worst = std::max(moyal_worst, std::abs(lhs - rhs) / rhs);
  }
  bool pass = submult && dominates && moyal_worst <= 1e-10;
  report(8, pass,
         std::string("cd submultiplicative on 50 pairs: ") + (submult ? "yes" : "NO") +
             ", cd >= l2 operator norm: " + (dominates ? "yes" : "NO") +
             ", energy identity error " + fmt(moyal_worst) + " (tol 1e-10)");
}

void criterion_9_determinism() {
  ExperimentConfig cfg = load_config("gabor16.json");
  fs::path out1 = fs::temp_directory_path() / "phasecover-acc-det1";
  fs::path out2 = fs::temp_directory_path() / "phasecover-acc-det2";
  fs::remove_all(out1);
  fs::remove_all(out2);
  bool ran = run_experiment(cfg, out1).exit_code == 0 &&
             run_experiment(cfg, out2).exit_code == 0;
  bool identical = ran;
  if (ran) {
    for (const char* rel : {"certificate.csv", "equivalence.csv", "plotdata/error_vs_u.csv"}) {
      if (slurp(out1 / rel) != slurp(out2 / rel) || slurp(out1 / rel).empty())
        identical = false;
    }
  }
  fs::remove_all(out1);
  fs::remove_all(out2);
  report(9, identical,
         std::string("two runs of the bundled gabor16 fixture: ") +
             (identical ? "byte-identical CSV outputs" : "outputs differ"));
}

}  // namespace

int main() {
  std::printf("phasecover acceptance suite\n");

  GaborSystem gs16 = make_gabor_system(16, 2, 2, gaussian_window(16));
  PartitionOfUnity pu16 = plane_partition(gs16.plane, 4, 8.0);
  Weight w16 = Weight::one(gs16.plane);
  Neighborhood v16 = Neighborhood::box(gs16.plane, 1);
  KernelEnvelope ke16 = kernel_envelope(gs16.system, w16, v16);

  criterion_1_projector(gs16, ke16);

  GaborSystem gs32 = make_gabor_system(32, 4, 4, gaussian_window(32));
  PartitionOfUnity pu32 = plane_partition(gs32.plane, 4, 8.0);
  Weight w32 = Weight::one(gs32.plane);
  Neighborhood v32 = Neighborhood::box(gs32.plane, 1);
  KernelEnvelope ke32 = kernel_envelope(gs32.system, w32, v32);
  SolidSpaceSpec e32 = SolidSpaceSpec::lp(gs32.plane, 2, Weight::one(gs32.plane), w32);
  std::vector<std::int64_t> radii = {2, 4, 8, 16};
  std::vector<double> eps = {0.1, 0.01};
  CoverCertificate cert = projector_cover_certificate(gs32.system, pu32, ke32, e32, w32,
                                                      v32, radii, 100, kDefaultTrialSeed,
                                                      1, eps);
  criterion_2_certificate(cert);
  criterion_3_multiplier_approx(gs32, pu32);
  criterion_4_equivalence(gs16, pu16);
  criterion_5_scaled_families(gs16, pu16);
  criterion_6_counterexample();
  criterion_7_harness_oracle();
  criterion_8_algebra();
  criterion_9_determinism();

  if (g_failures == 0) {
    std::printf("all criteria passed\n");
    return 0;
  }
  std::printf("%d criteria failed\n", g_failures);
  return 1;
}

#include "phasecover/experiment.hpp"

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "phasecover/gabor.hpp"
#include "phasecover/localized.hpp"
#include "phasecover/rng.hpp"
#include "phasecover/serialize.hpp"
#include "phasecover/threads.hpp"
#include "phasecover/version.hpp"

namespace phasecover {

namespace fs = std::filesystem;

namespace {

using nlohmann::json;

// Stage timings on stderr when PHASECOVER_TIMING is set; outputs unaffected.
class StageTimer {
 public:
  StageTimer() : enabled_(std::getenv("PHASECOVER_TIMING") != nullptr) {}
  void mark(const char* stage) {
    if (!enabled_) return;
    auto now = std::chrono::steady_clock::now();
    std::fprintf(stderr, "[timing] %-24s %8.3fs\n", stage,
                 std::chrono::duration<double>(now - last_).count());
    last_ = now;
  }

 private:
  bool enabled_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

std::string fmt(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string fmt_exponent(double p) {
  if (p == kInf) return "inf";
  return fmt(p);
}

void write_csv(const fs::path& path, const std::string& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << header << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ",";
      out << row[i];
    }
    out << "\n";
  }
}

struct BuiltExperiment {
  Group carrier;
  Neighborhood v;
  Weight w;
  std::vector<SolidSpaceSpec> spaces;
  MoleculeSystem sys;
  std::optional<GaborSystem> gabor;
  PartitionOfUnity pu;
  std::optional<SymbolMask> mask;
  std::vector<std::int64_t> radii;
  std::vector<Elem> mask_window;
};

Group make_carrier(const CarrierSpec& spec) {
  if (spec.kind == "cyclic") return Group::cyclic(spec.dim, spec.modulus);
  return Group::lattice(spec.dim);
}

Weight make_weight(const WeightSpec& spec, const Group& g) {
  if (spec.family == "one") return Weight::one(g);
  if (spec.family == "polynomial") return Weight::polynomial(g, spec.alpha);
  return Weight::exponential(g, spec.base);
}

MoleculeSystem make_system(const ExperimentConfig& cfg, const Group& carrier,
                           const Neighborhood& v, std::optional<GaborSystem>& gabor_out) {
  const SystemSpec& spec = cfg.system;
  if (spec.type == "gabor") {
    if (carrier.kind() != Group::Kind::cyclic || carrier.dim() != 2 ||
        carrier.modulus() != spec.n)
      throw ValidationError(
          "config.carrier: gabor systems live on the cyclic plane with modulus n");
    auto [da, db] = default_gabor_lattice(spec.n);
    std::int64_t a = spec.a > 0 ? spec.a : da;
    std::int64_t b = spec.b > 0 ? spec.b : db;
    gabor_out = make_gabor_system(spec.n, a, b, gaussian_window(spec.n, spec.window.sigma), v);
    return gabor_out->system;
  }
  if (spec.type == "block") {
    if (carrier.kind() != Group::Kind::cyclic || carrier.dim() != 1 ||
        carrier.modulus() != spec.n)
      throw ValidationError("config.carrier: block systems live on cyclic dimension one");
    return block_system(spec.n, spec.block, v);
  }
  if (spec.type == "delta") {
    if (carrier.kind() != Group::Kind::cyclic)
      throw ValidationError("config.carrier: delta systems need a finite carrier");
    return delta_system(carrier, carrier.all_elements(), v);
  }
  // localized-frame
  if (carrier.kind() != Group::Kind::lattice || carrier.dim() != 1)
    throw ValidationError("config.carrier: localized frames live on the lattice, dimension one");
  LocalizedFrame frame =
      make_exponential_frame(spec.radius, spec.decay, spec.amplitude, spec.gen_seed);
  return to_molecule_system(frame, v);
}

PartitionOfUnity make_partition(const ExperimentConfig& cfg, const Group& carrier,
                                const Neighborhood& v, const MoleculeSystem& sys) {
  BupuProfile profile = cfg.partition.profile == "triangular" ? BupuProfile::triangular
                        : cfg.partition.profile == "raised_cosine"
                            ? BupuProfile::raised_cosine
                            : BupuProfile::gaussian_normalized;
  std::vector<Elem> centers;
  std::vector<Elem> window;
  if (carrier.kind() == Group::Kind::cyclic) {
    // Product grid of per-dimension arithmetic progressions from zero.
    std::vector<std::vector<std::int64_t>> axes(static_cast<std::size_t>(carrier.dim()));
    for (int i = 0; i < carrier.dim(); ++i) {
      for (std::int64_t c = 0; c < carrier.modulus();
           c += cfg.partition.step[static_cast<std::size_t>(i)])
        axes[static_cast<std::size_t>(i)].push_back(c);
    }
    std::vector<std::size_t> idx(static_cast<std::size_t>(carrier.dim()), 0);
    for (;;) {
      Elem e;
      for (int i = 0; i < carrier.dim(); ++i)
        e.c[i] = axes[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
      centers.push_back(e);
      int i = carrier.dim() - 1;
      for (; i >= 0; --i) {
        if (++idx[static_cast<std::size_t>(i)] < axes[static_cast<std::size_t>(i)].size()) break;
        idx[static_cast<std::size_t>(i)] = 0;
      }
      if (i < 0) break;
    }
  } else {
    // Step grid over the system window (its universe), aligned at zero.
    Elem lo = sys.universe().points().front(), hi = sys.universe().points().back();
    for (std::int64_t c = lo.c[0]; c <= hi.c[0]; ++c) {
      if (c % cfg.partition.step[0] == 0) centers.push_back(elem(c));
    }
    window = sys.universe().points();
  }
  return build_bupu(carrier, std::move(centers), profile, cfg.partition.width, v,
                    std::move(window));
}

std::optional<SymbolMask> make_mask(const MaskSpec& spec, const Group& g,
                                    std::span<const Elem> window) {
  if (!spec.present) return std::nullopt;
  GFunc m(g);
  if (spec.family == "constant") {
    m = constant_mask(g, window, spec.value);
  } else if (spec.family == "half_plane") {
    m = half_plane_mask(g, window, spec.axis);
  } else if (spec.family == "cosine") {
    m = cosine_mask(g, window, spec.offset, spec.amplitude, spec.axis);
  } else {
    m = sign_split_mask(g, window, elem(spec.position));
  }
  return SymbolMask::analyze(std::move(m), window);
}

BuiltExperiment build_experiment(const ExperimentConfig& cfg) {
  Group carrier = make_carrier(cfg.carrier);
  Neighborhood v = Neighborhood::box(carrier, cfg.carrier.v_radius);
  Weight w = make_weight(cfg.weight, carrier);
  std::vector<SolidSpaceSpec> spaces;
  for (const SpaceSpec& s : cfg.spaces) {
    Weight sv = make_weight(s.weight, carrier);
    spaces.push_back(s.split > 0 ? SolidSpaceSpec::mixed(carrier, s.p, s.q, s.split, sv, w)
                                 : SolidSpaceSpec::lp(carrier, s.p, sv, w));
  }
  std::optional<GaborSystem> gabor;
  MoleculeSystem sys = make_system(cfg, carrier, v, gabor);
  PartitionOfUnity pu = make_partition(cfg, carrier, v, sys);
  std::vector<Elem> mask_window = carrier.kind() == Group::Kind::cyclic
                                      ? carrier.all_elements()
                                      : sys.universe().points();
  std::optional<SymbolMask> mask = make_mask(cfg.partition.mask, carrier, mask_window);
  std::vector<std::int64_t> radii;
  std::int64_t r = cfg.exhaustion.initial_radius;
  for (int i = 0; i <= cfg.exhaustion.doublings; ++i) {
    radii.push_back(r);
    r *= 2;
  }
  return BuiltExperiment{std::move(carrier), std::move(v),      std::move(w),
                         std::move(spaces),  std::move(sys),    std::move(gabor),
                         std::move(pu),      std::move(mask),   std::move(radii),
                         std::move(mask_window)};
}

json invariant_entry(bool pass, double value) {
  json j;
  j["pass"] = pass;
  j["value"] = value;
  return j;
}

json run_invariant_suite(const BuiltExperiment& built, const ExperimentConfig& cfg,
                         const KernelEnvelope& ke, const CoverCertificate& cert,
                         int threads) {
  json inv;
  const MoleculeSystem& sys = built.sys;

  inv["group_axioms"] = invariant_entry(check_group_axioms(built.carrier), 0.0);

  std::int64_t wr = built.carrier.kind() == Group::Kind::cyclic
                        ? std::min<std::int64_t>(built.carrier.modulus() / 2, 4)
                        : 4;
  WeightAdmissibility wa = check_weight_admissible(built.w, wr);
  inv["weight_submultiplicative"] = invariant_entry(wa.submultiplicative, wa.worst_ratio);
  inv["weight_symmetric"] = invariant_entry(wa.symmetric, 0.0);
  std::vector<Elem> gens;
  for (int i = 0; i < built.carrier.dim(); ++i) {
    Elem g{};
    g.c[i] = 1;
    gens.push_back(g);
  }
  // Slowly growing weights need a deep tail before the heuristic verdict
  // clears 1 + tol; 256 steps suffice for the polynomial family.
  double grs_tail = 0;
  bool grs_pass = true;
  for (const GrsReport& rep : check_grs(built.w, gens, 256)) {
    grs_tail = std::max(grs_tail, rep.tail);
    grs_pass = grs_pass && rep.pass;
  }
  inv["weight_grs"] = invariant_entry(grs_pass, grs_tail);

  EnvelopeReport env = verify_envelope(sys);
  inv["envelope"] = invariant_entry(env.ok, env.worst_excess);

  const Eigen::MatrixXcd& p = sys.projector_matrix();
  double idem = op_norm_bound(Eigen::MatrixXcd(p * p - p));
  inv["projector_idempotent"] = invariant_entry(idem <= 1e-10, idem);
  double selfadj = op_norm_bound(Eigen::MatrixXcd(p - p.adjoint()));
  inv["projector_self_adjoint"] =
      invariant_entry(!sys.canonical_dual() || selfadj <= 1e-10, selfadj);

  int dom_trials = std::min(cfg.trials, 50);
  DominationReport dom = check_domination(sys, ke, dom_trials, cfg.seed, threads);
  inv["domination"] = invariant_entry(dom.worst_excess <= 1e-12, dom.worst_excess);

  // Formal adjoint identities on a few random pairs.
  {
    Rng rng(cfg.seed);
    const Universe& u = sys.universe();
    double worst = 0;
    for (int t = 0; t < 5; ++t) {
      GFunc f(built.carrier);
      for (const Elem& x : u.points()) f.set(x, rng.cnormal());
      std::vector<Cplx> c(sys.count());
      for (Cplx& ci : c) ci = rng.cnormal();
      DiscreteCoeffs cf = analysis(sys, f);
      Cplx lhs = 0.0;
      for (std::size_t i = 0; i < c.size(); ++i) lhs += cf.values[i] * std::conj(c[i]);
      Cplx rhs = inner_product(f, synthesis_adjoint(sys, c));
      worst = std::max(worst, std::abs(lhs - rhs));
      Cplx lhs2 = inner_product(synthesis(sys, c), f);
      DiscreteCoeffs sf = analysis_adjoint(sys, f);
      Cplx rhs2 = 0.0;
      for (std::size_t i = 0; i < c.size(); ++i) rhs2 += c[i] * std::conj(sf.values[i]);
      worst = std::max(worst, std::abs(lhs2 - rhs2));
    }
    inv["adjoint_identities"] = invariant_entry(worst <= 1e-8, worst);
  }

  inv["partition_exact"] = invariant_entry(built.pu.exact_partition, built.pu.sum_upper);
  inv["partition_sum_lower"] = invariant_entry(built.pu.sum_lower > 0, built.pu.sum_lower);

  bool monotone = true;
  for (std::size_t i = 1; i < cert.rows.size(); ++i) {
    if (cert.rows[i].theory_bound > cert.rows[i - 1].theory_bound + 1e-15) monotone = false;
  }
  inv["certificate_monotone"] =
      invariant_entry(monotone, cert.rows.empty() ? 0.0 : cert.rows.back().theory_bound);

  if (built.gabor) {
    Rng rng(cfg.seed);
    const std::int64_t n = built.gabor->n;
    double worst = 0;
    for (int t = 0; t < 10; ++t) {
      Eigen::VectorXcd f(n), h(n);
      for (std::int64_t i = 0; i < n; ++i) {
        f[i] = rng.cnormal();
        h[i] = rng.cnormal();
      }
      GFunc vf = stft(f, h);
      double lhs = 0;
      for (const auto& [x, val] : vf.values()) lhs += std::norm(val);
      double rhs = static_cast<double>(n) * h.squaredNorm() * f.squaredNorm();
      worst = std::max(worst, std::abs(lhs - rhs) / rhs);
    }
    inv["moyal_identity"] = invariant_entry(worst <= 1e-10, worst);
    inv["frame_lower"] = invariant_entry(built.gabor->frame_lower > 0, built.gabor->frame_lower);
    inv["frame_upper"] = invariant_entry(std::isfinite(built.gabor->frame_upper),
                                         built.gabor->frame_upper);
  }

  if (built.mask && !built.mask->positive_bounded) {
    // Sign-changing symbols: record the singular multiplier and the refusal.
    Eigen::MatrixXcd mm = phase_multiplier_matrix(sys, *built.mask);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(mm);
    double smin = svd.singularValues().size() ? svd.singularValues().minCoeff() : 0.0;
    inv["multiplier_sigma_min"] = invariant_entry(true, smin);
    bool refused = false;
    try {
      GramMatrix gram = gram_matrix(sys, *built.mask, built.w);
      GFunc f = from_dense(sys.universe(), Eigen::VectorXcd(sys.atom_matrix().col(0)));
      inverse_phase_multiplier(sys, gram, *built.mask, f);
    } catch (const NumericError&) {
      refused = true;
    }
    inv["multiplier_inverse_refused"] = invariant_entry(refused, 0.0);
  }

  return inv;
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg, const fs::path& out_dir, int threads) {
  try {
    StageTimer timer;
    threads = resolve_threads(threads);
    BuiltExperiment built = build_experiment(cfg);
    timer.mark("build");
    fs::create_directories(out_dir / "plotdata");
    const std::string hash = config_hash_hex(cfg);

    KernelEnvelope ke = kernel_envelope(built.sys, built.w, built.v);
    timer.mark("kernel_envelope");
    const double eps[] = {0.1, 0.01};
    CoverCertificate cert = projector_cover_certificate(
        built.sys, built.pu, ke, built.spaces.front(), built.w, built.v, built.radii,
        cfg.trials, cfg.seed, threads, eps);
    timer.mark("certificate");

    std::vector<std::vector<std::string>> cert_rows;
    for (const CertificateRow& row : cert.rows) {
      cert_rows.push_back({std::to_string(row.u_radius), fmt(row.empirical_opnorm),
                           fmt(row.theory_bound), hash});
    }
    write_csv(out_dir / "certificate.csv", "u_radius,empirical_opnorm,theory_bound,config_hash",
              cert_rows);

    // Multiplier approximation errors along the exhaustion, measured on
    // random span vectors in the orthonormal span basis.
    std::vector<std::vector<std::string>> plot_rows;
    {
      std::vector<std::pair<std::string, SymbolMask>> masks;
      masks.emplace_back("m1", SymbolMask::analyze(
                                   constant_mask(built.carrier, built.mask_window, 1.0),
                                   built.mask_window));
      if (built.mask) masks.emplace_back("mask", *built.mask);

      Rng rng(cfg.seed);
      const std::int64_t nb = built.sys.span_basis().cols();
      std::vector<Eigen::VectorXcd> probes;
      for (int t = 0; t < cfg.trials; ++t) {
        Eigen::VectorXcd c(static_cast<std::int64_t>(built.sys.count()));
        for (std::int64_t i = 0; i < c.size(); ++i) c[i] = rng.cnormal();
        Eigen::VectorXcd fb =
            built.sys.span_basis().adjoint() * (built.sys.atom_matrix() * c);
        if (fb.norm() > 0) probes.push_back(std::move(fb));
      }
      for (const auto& [label, mask] : masks) {
        Eigen::MatrixXcd mfull = phase_multiplier_matrix(built.sys, mask);
        for (std::int64_t r : built.radii) {
          CoverWindow u{built.carrier, r};
          Eigen::MatrixXcd mu = windowed_phase_multiplier_matrix(built.sys, built.pu, mask, u);
          double err = 0;
          if (nb > 0) {
            Eigen::MatrixXcd diff = mu - mfull;
            for (const Eigen::VectorXcd& fb : probes)
              err = std::max(err, (diff * fb).norm() / fb.norm());
          }
          plot_rows.push_back({std::to_string(r), label, fmt(err), hash});
        }
      }
      for (const CertificateRow& row : cert.rows) {
        plot_rows.push_back(
            {std::to_string(row.u_radius), "certificate_bound", fmt(row.theory_bound), hash});
      }
    }
    write_csv(out_dir / "plotdata" / "error_vs_u.csv", "u_radius,series,value,config_hash",
              plot_rows);
    timer.mark("multiplier_sweep");

    SolidSpaceSpec b =
        SolidSpaceSpec::lp(built.carrier, 2, Weight::one(built.carrier), built.w);
    const SymbolMask* theta =
        built.mask && built.mask->positive_bounded ? &*built.mask : nullptr;
    std::vector<EquivalenceRow> eq = norm_equivalence_report(
        built.sys, built.pu, built.spaces, b, theta, cfg.trials, cfg.seed, built.v);
    std::vector<std::vector<std::string>> eq_rows;
    for (const EquivalenceRow& row : eq) {
      eq_rows.push_back({row.space, fmt_exponent(row.p), fmt_exponent(row.q), row.weight,
                         std::to_string(row.trial_count), fmt(row.c_min), fmt(row.c_max),
                         fmt(row.spread()), hash});
    }
    write_csv(out_dir / "equivalence.csv",
              "space,p,q,weight,trial_count,c_min,c_max,ratio,config_hash", eq_rows);
    timer.mark("equivalence");

    json inv = run_invariant_suite(built, cfg, ke, cert, threads);
    inv["config_hash"] = hash;
    inv["version"] = kVersion;
    std::ofstream invout(out_dir / "invariants.json", std::ios::binary);
    invout << inv.dump(2) << "\n";
    timer.mark("invariants");

    return RunOutcome{0, "ok"};
  } catch (const ValidationError& e) {
    return RunOutcome{1, e.what()};
  } catch (const NumericError& e) {
    return RunOutcome{2, e.what()};
  }
}

namespace {

bool parse_number(const std::string& s, double* out) {
  const char* begin = s.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') return false;
  *out = v;
  return true;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("missing baseline file " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

std::optional<std::string> diff_csv(const fs::path& baseline, const fs::path& fresh,
                                    double tol) {
  auto a = read_csv(baseline);
  auto b = read_csv(fresh);
  if (a.size() != b.size())
    return baseline.filename().string() + ": row count " + std::to_string(a.size()) +
           " vs " + std::to_string(b.size());
  for (std::size_t r = 0; r < a.size(); ++r) {
    if (a[r].size() != b[r].size())
      return baseline.filename().string() + " row " + std::to_string(r) + ": column count";
    for (std::size_t c = 0; c < a[r].size(); ++c) {
      double x = 0, y = 0;
      if (parse_number(a[r][c], &x) && parse_number(b[r][c], &y)) {
        if (x == y) continue;  // covers the inf exponent cells
        if (std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)})) continue;
      } else if (a[r][c] == b[r][c]) {
        continue;
      }
      return baseline.filename().string() + " row " + std::to_string(r) + " col " +
             std::to_string(c) + ": baseline '" + a[r][c] + "' vs recomputed '" + b[r][c] + "'";
    }
  }
  return std::nullopt;
}

}  // namespace

RunOutcome verify_experiment(const ExperimentConfig& cfg, const fs::path& baseline_dir,
                             int threads) {
  if (!fs::exists(baseline_dir))
    return RunOutcome{1, "baseline directory does not exist: " + baseline_dir.string()};
  fs::path tmp = fs::temp_directory_path() /
                 ("phasecover-verify-" + config_hash_hex(cfg) + "-" +
                  std::to_string(static_cast<unsigned long>(::getpid())));
  fs::remove_all(tmp);
  RunOutcome run = run_experiment(cfg, tmp, threads);
  if (run.exit_code != 0) return run;
  const char* files[] = {"certificate.csv", "equivalence.csv", "plotdata/error_vs_u.csv"};
  for (const char* rel : files) {
    fs::path base = baseline_dir / rel;
    if (!fs::exists(base)) {
      fs::remove_all(tmp);
      return RunOutcome{1, "missing baseline file " + base.string()};
    }
    try {
      if (auto mismatch = diff_csv(base, tmp / rel, 1e-9)) {
        fs::remove_all(tmp);
        return RunOutcome{3, "verification mismatch: " + *mismatch};
      }
    } catch (const ValidationError& e) {
      fs::remove_all(tmp);
      return RunOutcome{1, e.what()};
    }
  }
  fs::remove_all(tmp);
  return RunOutcome{0, "verified"};
}

ExperimentConfig load_config(const std::string& path_or_fixture) {
  std::string text;
  if (fs::exists(path_or_fixture)) {
    std::ifstream in(path_or_fixture, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  } else {
    try {
      text = fixture_json(fs::path(path_or_fixture).filename().string());
    } catch (const ValidationError&) {
      throw ValidationError("config: no such file or bundled fixture: " + path_or_fixture);
    }
  }
  return parse_config(text);
}

}  // namespace phasecover

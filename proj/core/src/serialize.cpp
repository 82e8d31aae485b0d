#include "phasecover/serialize.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "json.hpp"
#include "phasecover/errors.hpp"

namespace phasecover {

namespace {

using nlohmann::json;

json group_to_json(const Group& g) {
  json j;
  j["kind"] = g.kind() == Group::Kind::cyclic ? "cyclic" : "lattice";
  j["dim"] = g.dim();
  if (g.kind() == Group::Kind::cyclic) j["modulus"] = g.modulus();
  return j;
}

Group group_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  int dim = j.at("dim").get<int>();
  if (kind == "cyclic") return Group::cyclic(dim, j.at("modulus").get<std::int64_t>());
  if (kind == "lattice") return Group::lattice(dim);
  throw ValidationError("carrier.kind: unknown value '" + kind + "'");
}

json elem_to_json(const Elem& x, int dim) {
  json j = json::array();
  for (int i = 0; i < dim; ++i) j.push_back(x.c[i]);
  return j;
}

Elem elem_from_json(const json& j) {
  std::vector<std::int64_t> coords = j.get<std::vector<std::int64_t>>();
  return elem(coords);
}

json gfunc_to_json(const GFunc& f) {
  json j = json::array();
  int dim = f.group().dim();
  for (const auto& [x, v] : f.values()) {
    j.push_back(json::array({elem_to_json(x, dim), v.real(), v.imag()}));
  }
  return j;
}

GFunc gfunc_from_json(const json& j, const Group& g) {
  GFunc f(g);
  for (const auto& triple : j) {
    f.set(elem_from_json(triple.at(0)),
          Cplx(triple.at(1).get<double>(), triple.at(2).get<double>()));
  }
  return f;
}

}  // namespace

std::string molecule_to_json(const MoleculeSystem& sys) {
  json j;
  j["carrier"] = group_to_json(sys.group());
  j["v_radius"] = 1;
  json nodes = json::array();
  for (const Elem& l : sys.nodes().points()) nodes.push_back(elem_to_json(l, sys.group().dim()));
  j["nodes"] = nodes;
  json atoms = json::array(), duals = json::array();
  for (const GFunc& a : sys.atoms()) atoms.push_back(gfunc_to_json(a));
  for (const GFunc& d : sys.duals()) duals.push_back(gfunc_to_json(d));
  j["atoms"] = atoms;
  j["duals"] = duals;
  j["envelope"] = gfunc_to_json(sys.envelope());
  j["canonical_dual"] = sys.canonical_dual();
  return j.dump(2);
}

MoleculeSystem molecule_from_json(const std::string& text) {
  json j = json::parse(text);
  Group g = group_from_json(j.at("carrier"));
  Neighborhood v = Neighborhood::box(g, j.value("v_radius", std::int64_t{1}));
  std::vector<Elem> node_points;
  for (const auto& n : j.at("nodes")) node_points.push_back(elem_from_json(n));
  std::vector<GFunc> atoms, duals;
  for (const auto& a : j.at("atoms")) atoms.push_back(gfunc_from_json(a, g));
  for (const auto& d : j.at("duals")) duals.push_back(gfunc_from_json(d, g));
  GFunc env = gfunc_from_json(j.at("envelope"), g);
  MoleculeSystem sys(g, RelSepSet(g, std::move(node_points), v), std::move(atoms),
                     std::move(duals), std::move(env), j.value("canonical_dual", false));
  sys.mark_envelope_verified(verify_envelope(sys).ok);
  return sys;
}

std::string partition_to_json(const PartitionOfUnity& pu) {
  json j;
  j["carrier"] = group_to_json(pu.group);
  int dim = pu.group.dim();
  json centers = json::array();
  for (const Elem& c : pu.centers.points()) centers.push_back(elem_to_json(c, dim));
  j["centers"] = centers;
  json functions = json::array();
  for (const GFunc& f : pu.functions) functions.push_back(gfunc_to_json(f));
  j["functions"] = functions;
  j["envelope"] = gfunc_to_json(pu.envelope);
  j["sum_lower"] = pu.sum_lower;
  j["sum_upper"] = pu.sum_upper;
  j["exact_partition"] = pu.exact_partition;
  json window = json::array();
  for (const Elem& x : pu.window) window.push_back(elem_to_json(x, dim));
  j["window"] = window;
  return j.dump(2);
}

PartitionOfUnity partition_from_json(const std::string& text) {
  json j = json::parse(text);
  Group g = group_from_json(j.at("carrier"));
  std::vector<Elem> centers;
  for (const auto& c : j.at("centers")) centers.push_back(elem_from_json(c));
  PartitionOfUnity pu{g,
                      RelSepSet(g, centers, Neighborhood::box(g, 1)),
                      {},
                      gfunc_from_json(j.at("envelope"), g),
                      j.at("sum_lower").get<double>(),
                      j.at("sum_upper").get<double>(),
                      j.at("exact_partition").get<bool>(),
                      {}};
  for (const auto& f : j.at("functions")) pu.functions.push_back(gfunc_from_json(f, g));
  for (const auto& x : j.at("window")) pu.window.push_back(elem_from_json(x));
  if (pu.functions.size() != pu.centers.size())
    throw ValidationError("partition: center/function count mismatch");
  return pu;
}

GFunc constant_mask(const Group& g, std::span<const Elem> window, double value) {
  GFunc m(g);
  for (const Elem& x : window) m.set(x, value);
  return m;
}

GFunc half_plane_mask(const Group& g, std::span<const Elem> window, int axis) {
  GFunc m(g);
  for (const Elem& x : window) {
    if (g.min_residue(x).c[axis] >= 0) m.set(x, 1.0);
  }
  return m;
}

GFunc cosine_mask(const Group& g, std::span<const Elem> window, double offset,
                  double amplitude, int axis) {
  if (g.kind() != Group::Kind::cyclic)
    throw std::invalid_argument("cosine_mask: needs a cyclic carrier for the period");
  GFunc m(g);
  const double tau = 6.283185307179586476925286766559;
  double period = static_cast<double>(g.modulus());
  for (const Elem& x : window) {
    double v = offset + amplitude * std::cos(tau * static_cast<double>(x.c[axis]) / period);
    m.set(x, v);
  }
  return m;
}

GFunc sign_split_mask(const Group& g, std::span<const Elem> window, const Elem& position) {
  GFunc m(g);
  Elem p = g.canon(position);
  for (const Elem& x : window) m.set(x, x == p ? -1.0 : 1.0);
  return m;
}

SymbolMask mask_from_json(const std::string& text, const Group& g,
                          std::span<const Elem> window) {
  json j = json::parse(text);
  GFunc m(g);
  if (j.contains("grid")) {
    m = gfunc_from_json(j.at("grid"), g);
  } else {
    std::string family = j.at("family").get<std::string>();
    if (family == "constant") {
      m = constant_mask(g, window, j.value("value", 1.0));
    } else if (family == "half_plane") {
      m = half_plane_mask(g, window, j.value("axis", 0));
    } else if (family == "cosine") {
      m = cosine_mask(g, window, j.value("offset", 0.6), j.value("amplitude", 0.3),
                      j.value("axis", 0));
    } else if (family == "sign_split") {
      m = sign_split_mask(g, window, elem(j.value("position", std::int64_t{1})));
    } else {
      throw ValidationError("mask.family: unknown value '" + family + "'");
    }
  }
  return SymbolMask::analyze(std::move(m), window);
}

void write_signal(const std::string& path, const Eigen::VectorXcd& x) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("write_signal: cannot open " + path);
  std::uint64_t n = static_cast<std::uint64_t>(x.size());
  unsigned char header[8];
  for (int i = 0; i < 8; ++i) header[i] = static_cast<unsigned char>((n >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(header), 8);
  for (std::int64_t i = 0; i < x.size(); ++i) {
    double pair[2] = {x[i].real(), x[i].imag()};
    out.write(reinterpret_cast<const char*>(pair), sizeof pair);
  }
}

Eigen::VectorXcd read_signal(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("read_signal: cannot open " + path);
  unsigned char header[8];
  in.read(reinterpret_cast<char*>(header), 8);
  if (!in) throw ValidationError("read_signal: truncated header in " + path);
  std::uint64_t n = 0;
  for (int i = 0; i < 8; ++i) n |= static_cast<std::uint64_t>(header[i]) << (8 * i);
  Eigen::VectorXcd x(static_cast<std::int64_t>(n));
  for (std::uint64_t i = 0; i < n; ++i) {
    double pair[2];
    in.read(reinterpret_cast<char*>(pair), sizeof pair);
    if (!in) throw ValidationError("read_signal: truncated payload in " + path);
    x[static_cast<std::int64_t>(i)] = Cplx(pair[0], pair[1]);
  }
  return x;
}

void write_signal_sidecar(const std::string& path, const SignalSidecar& meta) {
  json j;
  j["n"] = meta.n;
  j["a"] = meta.a;
  j["b"] = meta.b;
  j["window"] = meta.window_family;
  std::ofstream out(path);
  if (!out) throw ValidationError("write_signal_sidecar: cannot open " + path);
  out << j.dump(2) << "\n";
}

SignalSidecar read_signal_sidecar(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("read_signal_sidecar: cannot open " + path);
  json j = json::parse(in);
  SignalSidecar meta;
  meta.n = j.at("n").get<std::int64_t>();
  meta.a = j.at("a").get<std::int64_t>();
  meta.b = j.at("b").get<std::int64_t>();
  meta.window_family = j.value("window", "gaussian");
  return meta;
}

}  // namespace phasecover

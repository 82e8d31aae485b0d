#include "phasecover/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace phasecover {

namespace {

void require_exponent(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("exponent outside [1, inf]");
}

// Accumulates an l^p norm of nonnegative terms; p = inf takes the sup.
// Empty input gives 0 (the 0 * inf = 0 convention for empty supports).
class PowerAccumulator {
 public:
  explicit PowerAccumulator(double p) : p_(p) {}
  void add(double term) {
    if (p_ == kInf) {
      value_ = std::max(value_, term);
    } else if (p_ == 1.0) {
      value_ += term;
    } else {
      value_ += std::pow(term, p_);
    }
  }
  double finish() const {
    if (p_ == kInf || p_ == 1.0) return value_;
    return std::pow(value_, 1.0 / p_);
  }

 private:
  double p_;
  double value_ = 0;
};

Elem outer_key(const Elem& x, int split_dim) {
  Elem k{};
  for (int i = split_dim; i < kMaxDim; ++i) k.c[i] = x.c[i];
  return k;
}

}  // namespace

SolidSpaceSpec SolidSpaceSpec::lp(const Group& g, double p, Weight v, Weight w) {
  require_exponent(p);
  return SolidSpaceSpec{g, p, p, 0, std::move(v), std::move(w), 0, 0};
}

SolidSpaceSpec SolidSpaceSpec::mixed(const Group& g, double p, double q, int split_dim,
                                     Weight v, Weight w) {
  require_exponent(p);
  require_exponent(q);
  if (split_dim < 1 || split_dim >= g.dim())
    throw std::invalid_argument("SolidSpaceSpec: split must leave inner and outer blocks nonempty");
  return SolidSpaceSpec{g, p, q, split_dim, std::move(v), std::move(w), 0, 0};
}

std::string SolidSpaceSpec::label() const {
  std::ostringstream os;
  auto expo = [](double e) -> std::string {
    if (e == kInf) return "inf";
    std::ostringstream s;
    s << e;
    return s.str();
  };
  if (split_dim == 0) {
    os << "l" << expo(p);
  } else {
    os << "l(" << expo(p) << "," << expo(q) << ")";
  }
  if (v.label() != "one") os << "_" << v.label();
  return os.str();
}

double space_norm(const GFunc& f, const SolidSpaceSpec& e) {
  require_exponent(e.p);
  if (!(f.group() == e.group)) throw std::invalid_argument("space_norm: carrier mismatch");
  if (e.split_dim == 0) {
    PowerAccumulator acc(e.p);
    for (const auto& [x, val] : f.values()) acc.add(std::abs(val) * e.v(x));
    return acc.finish();
  }
  require_exponent(e.q);
  // Inner p-norm over the leading block, outer q-norm over the rest. The map
  // is keyed by the outer coordinates; iteration stays deterministic.
  std::map<Elem, PowerAccumulator> groups;
  for (const auto& [x, val] : f.values()) {
    auto it = groups.try_emplace(outer_key(x, e.split_dim), PowerAccumulator(e.p)).first;
    it->second.add(std::abs(val) * e.v(x));
  }
  PowerAccumulator outer(e.q);
  for (const auto& [key, acc] : groups) outer.add(acc.finish());
  return outer.finish();
}

double translation_norm(const SolidSpaceSpec& e, const Elem& x, Side side,
                        std::int64_t window_radius) {
  // Both carriers are abelian, so left translation by x and right translation
  // by x^{-1} move points identically; the operator norm is the sup of the
  // displaced-weight ratio either way.
  (void)side;
  const Group& g = e.group;
  std::vector<Elem> window =
      g.kind() == Group::Kind::cyclic ? g.all_elements() : g.box(window_radius);
  double best = 0;
  for (const Elem& y : window) {
    best = std::max(best, e.v(g.op(x, y)) / e.v(y));
  }
  return best;
}

SpaceValidation validate_space(SolidSpaceSpec& e, std::int64_t radius) {
  const Group& g = e.group;
  auto pts = g.box(radius);
  SpaceValidation out;
  double admissibility = kInf;
  for (const Elem& x : pts) {
    double u = translation_norm(e, x, Side::left, radius);
    double ui = translation_norm(e, g.inverse(x), Side::left, radius);
    double biggest = std::max(u, ui);  // left and right norms coincide (abelian)
    admissibility = std::min(admissibility, e.w(x) / biggest);
  }
  out.admissibility_constant = admissibility;
  double moderate = 0;
  for (const Elem& x : pts) {
    for (const Elem& y : pts) {
      moderate = std::max(moderate, e.v(g.op(x, y)) / (e.w(x) * e.v(y)));
    }
  }
  out.moderate_constant = moderate;
  e.admissibility_constant = out.admissibility_constant;
  e.moderate_constant = out.moderate_constant;
  return out;
}

GFunc local_max(const GFunc& f, const Neighborhood& v, Side side) {
  const Group& g = f.group();
  GFunc out(g);
  // f#(x) = sup_{y in V}|f(xy)| spreads each support point s to sV^{-1};
  // f_#(x) = sup_{y in V}|f(yx)| spreads it to V^{-1}s. V is symmetric.
  for (const auto& [s, val] : f.values()) {
    double a = std::abs(val);
    for (const Elem& y : v.points()) {
      Elem x = side == Side::left ? g.op(s, g.inverse(y)) : g.op(g.inverse(y), s);
      auto cur = out.at(x);
      if (a > cur.real()) out.set(x, a);
    }
  }
  return out;
}

double weighted_l1(const GFunc& f, const Weight& w) {
  double s = 0;
  for (const auto& [x, val] : f.values()) s += std::abs(val) * w(x);
  return s;
}

double amalgam_norm(const GFunc& f, AmalgamKind kind, const SolidSpaceSpec& e,
                    const Neighborhood& v) {
  switch (kind) {
    case AmalgamKind::left:
      return space_norm(local_max(f, v, Side::left), e);
    case AmalgamKind::right:
      return space_norm(involute(local_max(f, v, Side::right)), e);
    default:
      throw std::invalid_argument("amalgam_norm: weak/strong kinds take a Weight");
  }
}

double amalgam_norm(const GFunc& f, AmalgamKind kind, const Weight& w,
                    const Neighborhood& v) {
  const Group& g = f.group();
  GFunc chi = GFunc::indicator(g, v.points());
  switch (kind) {
    case AmalgamKind::weak_left:
      return weighted_l1(local_max(convolve(chi, abs_fn(f)), v, Side::left), w);
    case AmalgamKind::weak_right:
      return weighted_l1(local_max(convolve(abs_fn(f), chi), v, Side::right), w);
    case AmalgamKind::strong:
      return weighted_l1(local_max(local_max(f, v, Side::right), v, Side::left), w);
    case AmalgamKind::left:
      return weighted_l1(local_max(f, v, Side::left), w);
    case AmalgamKind::right:
      return weighted_l1(involute(local_max(f, v, Side::right)), w);
  }
  throw std::invalid_argument("amalgam_norm: unknown kind");
}

double w_l1_linf_norm(const GFunc& f, const Neighborhood& v) {
  const Group& g = f.group();
  // Control function K(x) = |f chi_{xV}|_1; its sup is attained at some
  // x in supp(f) V^{-1}.
  std::map<Elem, double> control;
  for (const auto& [s, val] : f.values()) {
    double a = std::abs(val);
    for (const Elem& y : v.points()) control[g.op(s, g.inverse(y))] += a;
  }
  double best = 0;
  for (const auto& [x, k] : control) best = std::max(best, k);
  return best;
}

double ed_norm(const DiscreteCoeffs& c, const SolidSpaceSpec& e, const Neighborhood& v) {
  if (c.values.size() != c.nodes.size())
    throw std::invalid_argument("ed_norm: node/value length mismatch");
  const Group& g = c.nodes.group();
  GFunc stack(g);
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    double a = std::abs(c.values[i]);
    if (a == 0.0) continue;
    const Elem& node = c.nodes.points()[i];
    for (const Elem& y : v.points()) stack.add(g.op(node, y), a);
  }
  return space_norm(stack, e);
}

double edb_norm(const VectorCoeffs& f, const SolidSpaceSpec& e, const SolidSpaceSpec& b,
                const Neighborhood& v) {
  if (f.entries.size() != f.nodes.size())
    throw std::invalid_argument("edb_norm: node/entry length mismatch");
  DiscreteCoeffs norms{f.nodes, {}};
  norms.values.reserve(f.entries.size());
  for (const GFunc& entry : f.entries) norms.values.emplace_back(space_norm(entry, b));
  return ed_norm(norms, e, v);
}

}  // namespace phasecover

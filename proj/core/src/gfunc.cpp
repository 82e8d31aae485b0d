#include "phasecover/gfunc.hpp"

#include <cmath>
#include <stdexcept>

namespace phasecover {

namespace {
void require_same_carrier(const GFunc& f, const GFunc& g, const char* who) {
  if (!(f.group() == g.group()))
    throw std::invalid_argument(std::string(who) + ": carrier mismatch");
}
}  // namespace

GFunc GFunc::delta(const Group& g, const Elem& x, Cplx value) {
  GFunc f(g);
  f.set(x, value);
  return f;
}

GFunc GFunc::indicator(const Group& g, std::span<const Elem> points) {
  GFunc f(g);
  for (const Elem& p : points) f.set(p, 1.0);
  return f;
}

Cplx GFunc::at(const Elem& x) const {
  auto it = values_.find(group_.canon(x));
  return it == values_.end() ? Cplx(0.0) : it->second;
}

void GFunc::set(const Elem& x, Cplx v) {
  Elem c = group_.canon(x);
  if (v == Cplx(0.0)) {
    values_.erase(c);
  } else {
    values_[c] = v;
  }
}

void GFunc::add(const Elem& x, Cplx v) {
  Elem c = group_.canon(x);
  auto [it, inserted] = values_.try_emplace(c, v);
  if (!inserted) {
    it->second += v;
    if (it->second == Cplx(0.0)) values_.erase(it);
  } else if (v == Cplx(0.0)) {
    values_.erase(it);
  }
}

GFunc translate(const GFunc& f, const Elem& x, Side side) {
  const Group& g = f.group();
  GFunc out(g);
  if (side == Side::left) {
    // L_x f(y) = f(x^{-1} y): support moves to x * supp(f).
    for (const auto& [y, v] : f.values()) out.set(g.op(x, y), v);
  } else {
    // R_x f(y) = f(y x): support moves to supp(f) * x^{-1}.
    Elem xi = g.inverse(x);
    for (const auto& [y, v] : f.values()) out.set(g.op(y, xi), v);
  }
  return out;
}

GFunc involute(const GFunc& f) {
  const Group& g = f.group();
  GFunc out(g);
  for (const auto& [y, v] : f.values()) out.set(g.inverse(y), v);
  return out;
}

GFunc convolve(const GFunc& f, const GFunc& g) {
  require_same_carrier(f, g, "convolve");
  const Group& grp = f.group();
  GFunc out(grp);
  // (f*g)(x) = sum_y f(y) g(y^{-1} x), x = y*z over supp(f) x supp(g).
  for (const auto& [y, fv] : f.values()) {
    for (const auto& [z, gv] : g.values()) {
      out.add(grp.op(y, z), fv * gv);
    }
  }
  return out;
}

GFunc pointwise_mul(const GFunc& f, const GFunc& g) {
  require_same_carrier(f, g, "pointwise_mul");
  GFunc out(f.group());
  const bool f_smaller = f.support_size() <= g.support_size();
  const GFunc& a = f_smaller ? f : g;
  const GFunc& b = f_smaller ? g : f;
  for (const auto& [x, v] : a.values()) {
    Cplx w = b.at(x);
    if (w != Cplx(0.0)) out.set(x, f_smaller ? v * w : w * v);
  }
  return out;
}

GFunc add(const GFunc& f, const GFunc& g) {
  require_same_carrier(f, g, "add");
  GFunc out = f;
  for (const auto& [x, v] : g.values()) out.add(x, v);
  return out;
}

GFunc scaled(const GFunc& f, Cplx factor) {
  GFunc out(f.group());
  if (factor == Cplx(0.0)) return out;
  for (const auto& [x, v] : f.values()) out.set(x, factor * v);
  return out;
}

GFunc abs_fn(const GFunc& f) {
  GFunc out(f.group());
  for (const auto& [x, v] : f.values()) out.set(x, std::abs(v));
  return out;
}

GFunc restricted(const GFunc& f, const std::function<bool(const Elem&)>& keep) {
  GFunc out(f.group());
  for (const auto& [x, v] : f.values()) {
    if (keep(x)) out.set(x, v);
  }
  return out;
}

double sup_abs(const GFunc& f) {
  double m = 0;
  for (const auto& [x, v] : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double l2_norm(const GFunc& f) {
  double s = 0;
  for (const auto& [x, v] : f.values()) s += std::norm(v);
  return std::sqrt(s);
}

Cplx inner_product(const GFunc& f, const GFunc& g) {
  require_same_carrier(f, g, "inner_product");
  Cplx s = 0.0;
  const bool f_smaller = f.support_size() <= g.support_size();
  if (f_smaller) {
    for (const auto& [x, v] : f.values()) s += v * std::conj(g.at(x));
  } else {
    for (const auto& [x, w] : g.values()) s += f.at(x) * std::conj(w);
  }
  return s;
}

}  // namespace phasecover

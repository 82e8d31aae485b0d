#include "phasecover/weight.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace phasecover {

Weight Weight::polynomial(const Group& g, double alpha) {
  return Weight(g, Family::polynomial, alpha);
}

Weight Weight::exponential(const Group& g, double base) {
  if (base <= 0) throw std::invalid_argument("Weight::exponential: base must be positive");
  return Weight(g, Family::exponential, base);
}

Weight Weight::table(const Group& g, std::map<Elem, double> values, double fill) {
  Weight w(g, Family::table, 0.0);
  for (const auto& [x, v] : values) {
    if (v <= 0) throw std::invalid_argument("Weight::table: values must be positive");
    w.table_[g.canon(x)] = v;
  }
  if (fill <= 0) throw std::invalid_argument("Weight::table: fill must be positive");
  w.fill_ = fill;
  return w;
}

double Weight::operator()(const Elem& x) const {
  switch (family_) {
    case Family::polynomial:
      if (param_ == 0.0) return 1.0;
      return std::pow(1.0 + group_.norm(x), param_);
    case Family::exponential:
      return std::pow(param_, group_.norm(x));
    case Family::table: {
      auto it = table_.find(group_.canon(x));
      return it == table_.end() ? fill_ : it->second;
    }
  }
  return 1.0;
}

std::string Weight::label() const {
  std::ostringstream os;
  switch (family_) {
    case Family::polynomial:
      if (param_ == 0.0) return "one";
      os << "poly(" << param_ << ")";
      break;
    case Family::exponential:
      os << "exp(" << param_ << ")";
      break;
    case Family::table:
      os << "table";
      break;
  }
  return os.str();
}

WeightAdmissibility check_weight_admissible(const Weight& w, std::int64_t sample_radius) {
  const Group& g = w.group();
  auto pts = g.box(sample_radius);
  WeightAdmissibility rep;
  rep.symmetric = true;
  double worst = 0;
  for (const Elem& x : pts) {
    double wx = w(x);
    if (std::abs(wx - w(g.inverse(x))) > 1e-12 * wx) rep.symmetric = false;
    for (const Elem& y : pts) {
      double ratio = w(g.op(x, y)) / (wx * w(y));
      worst = std::max(worst, ratio);
    }
  }
  rep.worst_ratio = worst;
  rep.submultiplicative = worst <= 1.0 + 1e-12;
  return rep;
}

std::vector<GrsReport> check_grs(const Weight& w, std::span<const Elem> generators,
                                 int n_max, double tol) {
  if (n_max < 2) throw std::invalid_argument("check_grs: n_max must be at least 2");
  const Group& g = w.group();
  std::vector<GrsReport> out;
  for (const Elem& gen : generators) {
    GrsReport rep;
    rep.generator = g.canon(gen);
    rep.tol = tol;
    Elem power = g.identity();
    for (int n = 1; n <= n_max; ++n) {
      power = g.op(power, gen);
      rep.values.push_back(std::pow(w(power), 1.0 / n));
    }
    rep.tail = rep.values.back();
    rep.pass = rep.tail < 1.0 + tol;
    out.push_back(std::move(rep));
  }
  return out;
}

}  // namespace phasecover

#pragma once

#include <complex>
#include <functional>
#include <map>
#include <span>

#include "phasecover/group.hpp"

namespace phasecover {

using Cplx = std::complex<double>;

/// Finitely supported complex function on a carrier. Exact zeros are pruned
/// on write, so the stored support is the true support. Iteration order is
/// the lexicographic element order, which keeps every accumulation
/// deterministic.
class GFunc {
 public:
  using Map = std::map<Elem, Cplx>;

  explicit GFunc(const Group& g) : group_(g) {}

  static GFunc delta(const Group& g, const Elem& x, Cplx value = 1.0);
  static GFunc indicator(const Group& g, std::span<const Elem> points);

  const Group& group() const { return group_; }
  const Map& values() const { return values_; }
  std::size_t support_size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  Cplx at(const Elem& x) const;
  void set(const Elem& x, Cplx v);
  void add(const Elem& x, Cplx v);

 private:
  Group group_;
  Map values_;
};

GFunc translate(const GFunc& f, const Elem& x, Side side);
GFunc involute(const GFunc& f);
GFunc convolve(const GFunc& f, const GFunc& g);

GFunc pointwise_mul(const GFunc& f, const GFunc& g);
GFunc add(const GFunc& f, const GFunc& g);
GFunc scaled(const GFunc& f, Cplx factor);
/// |f| as a real-valued GFunc.
GFunc abs_fn(const GFunc& f);
/// Keep only points satisfying the predicate.
GFunc restricted(const GFunc& f, const std::function<bool(const Elem&)>& keep);

double sup_abs(const GFunc& f);
double l2_norm(const GFunc& f);
Cplx inner_product(const GFunc& f, const GFunc& g);  // sum f conj(g)

}  // namespace phasecover

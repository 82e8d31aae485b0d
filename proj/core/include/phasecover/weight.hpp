#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "phasecover/group.hpp"

namespace phasecover {

/// Strictly positive weight on a carrier. Families:
///   polynomial  (1+|x|)^alpha
///   exponential base^|x|
///   table       explicit values with a fill value elsewhere
/// |x| is the Euclidean length of the minimal residue, so cyclic carriers use
/// the circular distance and every family is symmetric by construction.
class Weight {
 public:
  enum class Family { polynomial, exponential, table };

  static Weight one(const Group& g) { return polynomial(g, 0.0); }
  static Weight polynomial(const Group& g, double alpha);
  static Weight exponential(const Group& g, double base);
  static Weight table(const Group& g, std::map<Elem, double> values, double fill = 1.0);

  double operator()(const Elem& x) const;
  const Group& group() const { return group_; }
  Family family() const { return family_; }
  double parameter() const { return param_; }
  std::string label() const;

 private:
  Weight(const Group& g, Family f, double param) : group_(g), family_(f), param_(param) {}
  Group group_;
  Family family_;
  double param_ = 0;
  std::map<Elem, double> table_;
  double fill_ = 1.0;
};

struct WeightAdmissibility {
  bool submultiplicative = false;
  bool symmetric = false;
  double worst_ratio = 0;  // max of w(xy)/(w(x)w(y)) over the sampled pairs
};

/// Checks symmetry and submultiplicativity on all pairs within a centered box
/// of the given radius. Violations are reported, never thrown.
WeightAdmissibility check_weight_admissible(const Weight& w, std::int64_t sample_radius);

struct GrsReport {
  Elem generator;
  std::vector<double> values;  // w(n*gen)^{1/n}, n = 1..n_max
  double tail = 0;
  double tol = 0.05;
  bool pass = false;
};

/// Growth test along cyclic subgroups: the sequence w(gen^n)^{1/n} must
/// approach one for the weight to be spectrally harmless. The limit cannot be
/// decided from finitely many terms; the verdict compares the tail value
/// against 1 + tol.
std::vector<GrsReport> check_grs(const Weight& w, std::span<const Elem> generators,
                                 int n_max = 64, double tol = 0.05);

}  // namespace phasecover

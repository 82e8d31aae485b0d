#pragma once

#include <limits>
#include <string>
#include <vector>

#include "phasecover/gfunc.hpp"
#include "phasecover/weight.hpp"

namespace phasecover {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Parameters of a solid mixed-norm sequence space l^{p,q}_v together with a
/// reference admissible weight w. With split_dim == 0 the norm is the plain
/// weighted l^p norm; with split_dim = k the inner p-norm runs over the first
/// k coordinates and the outer q-norm over the rest.
struct SolidSpaceSpec {
  Group group;
  double p = 2;
  double q = 2;
  int split_dim = 0;
  Weight v;
  Weight w;
  // Filled by validate_space: largest C with w(x) >= C*max{u(x),u(x^{-1}),
  // v^(x), v^(x^{-1})} on the checked range, and smallest C' with
  // v(xy) <= C' w(x) v(y).
  double admissibility_constant = 0;
  double moderate_constant = 0;

  static SolidSpaceSpec lp(const Group& g, double p, Weight v, Weight w);
  static SolidSpaceSpec mixed(const Group& g, double p, double q, int split_dim,
                              Weight v, Weight w);
  std::string label() const;
};

double space_norm(const GFunc& f, const SolidSpaceSpec& e);

/// Operator norm of the left translation L_x (side == left) or of the right
/// translation R_{x^{-1}} (side == right) on the space: sup of the weight
/// ratio v(x*y)/v(y) over the window. Exact on cyclic carriers.
double translation_norm(const SolidSpaceSpec& e, const Elem& x, Side side,
                        std::int64_t window_radius = 32);

struct SpaceValidation {
  double admissibility_constant = 0;
  double moderate_constant = 0;
};

/// Computes and stores the admissibility and moderateness constants of the
/// spec over a centered box of the given radius.
SpaceValidation validate_space(SolidSpaceSpec& e, std::int64_t radius);

/// Local maximum functions: left f#(x) = sup_{y in V} |f(xy)|,
/// right f_#(x) = sup_{y in V} |f(yx)|. The discrete dilation of |f| by V.
GFunc local_max(const GFunc& f, const Neighborhood& v, Side side);

double weighted_l1(const GFunc& f, const Weight& w);

enum class AmalgamKind { left, right, weak_left, weak_right, strong };

/// Wiener-type amalgam norms with sup-local component:
///   left   |f#|_E            right  |(f_#)^inv|_E
/// The weak and strong kinds live over l^1_w and take a Weight instead:
///   weak_left  |(chi_V * |f|)#|_{l^1_w}
///   weak_right |(|f| * chi_V)_#|_{l^1_w}
///   strong     |(f_#)#|_{l^1_w}
double amalgam_norm(const GFunc& f, AmalgamKind kind, const SolidSpaceSpec& e,
                    const Neighborhood& v);
double amalgam_norm(const GFunc& f, AmalgamKind kind, const Weight& w,
                    const Neighborhood& v);

/// |f| measured with l^1 local component and sup global component:
/// sup_x sum_{y in xV} |f(y)|.
double w_l1_linf_norm(const GFunc& f, const Neighborhood& v);

/// Scalar coefficients attached to a relatively separated node set.
struct DiscreteCoeffs {
  RelSepSet nodes;
  std::vector<Cplx> values;
};

/// One carrier function per node (the vector-valued coefficient object).
struct VectorCoeffs {
  RelSepSet nodes;
  std::vector<GFunc> entries;
};

/// Discrete-space norm: E-norm of the indicator stack sum_l |c_l| chi_{lV}.
/// The stack is materialized exactly; overlapping indicators add.
double ed_norm(const DiscreteCoeffs& c, const SolidSpaceSpec& e, const Neighborhood& v);

/// Vector-valued version: ed_norm of the per-node B-norms.
double edb_norm(const VectorCoeffs& f, const SolidSpaceSpec& e, const SolidSpaceSpec& b,
                const Neighborhood& v);

}  // namespace phasecover

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace phasecover {

inline constexpr int kMaxDim = 4;

/// A point of Z^d or Z_N^d. Coordinates beyond the carrier dimension stay
/// zero, so lexicographic comparison works for any dimension.
struct Elem {
  std::array<std::int64_t, kMaxDim> c{};
  friend constexpr auto operator<=>(const Elem&, const Elem&) = default;
};

Elem elem(std::int64_t x0);
Elem elem(std::int64_t x0, std::int64_t x1);
Elem elem(std::span<const std::int64_t> coords);
std::string to_string(const Elem& x, int dim);

enum class Side { left, right };

/// Discrete abelian carrier: the lattice Z^d or the finite cyclic group
/// Z_N^d, with counting measure as Haar measure. Both are unimodular, so the
/// modular function is identically one and integration is plain summation.
class Group {
 public:
  enum class Kind { lattice, cyclic };

  static Group lattice(int dim);
  static Group cyclic(int dim, std::int64_t modulus);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  std::int64_t modulus() const { return modulus_; }  // 0 for the lattice

  Elem identity() const { return Elem{}; }
  /// Canonical representative: cyclic coordinates reduced into [0, N).
  Elem canon(Elem x) const;
  Elem op(const Elem& a, const Elem& b) const;
  Elem inverse(const Elem& a) const;

  /// Representative with coordinates in [-N/2, N/2); identity on the lattice.
  Elem min_residue(const Elem& x) const;
  /// Euclidean length of the minimal residue.
  double norm(const Elem& x) const;

  /// Number of elements (0 = infinite).
  std::int64_t size() const;
  /// All elements in lexicographic order (cyclic carriers only).
  std::vector<Elem> all_elements() const;
  /// Canonicalized box {-r..r}^d, sorted and deduplicated.
  std::vector<Elem> box(std::int64_t radius) const;

  friend bool operator==(const Group&, const Group&) = default;

 private:
  Group(Kind k, int dim, std::int64_t modulus);
  Kind kind_;
  int dim_;
  std::int64_t modulus_;
};

/// Finite symmetric neighborhood of the identity; the unit of locality for
/// local maximum functions, amalgam norms and discrete-space indicators.
class Neighborhood {
 public:
  Neighborhood(const Group& g, std::vector<Elem> points);
  /// Default choice {-1,0,1}^d (or its mod-N image).
  static Neighborhood box(const Group& g, std::int64_t radius = 1);

  const Group& group() const { return group_; }
  const std::vector<Elem>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool contains(const Elem& x) const;

 private:
  Group group_;
  std::vector<Elem> points_;  // sorted, canonical
};

/// rho_V(Lambda) = sup_x #(Lambda `intersect` xV): largest number of points of
/// Lambda falling in a single translate of V.
std::int64_t spreadness(std::span<const Elem> lambda, const Neighborhood& v);

/// A finite node set with no repetitions and its cached spreadness.
class RelSepSet {
 public:
  RelSepSet(const Group& g, std::vector<Elem> points, const Neighborhood& v);

  const Group& group() const { return group_; }
  const std::vector<Elem>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  std::int64_t spread() const { return spread_; }
  const Neighborhood& neighborhood() const { return v_; }
  /// Position of x in the node list, -1 if absent.
  std::int64_t index_of(const Elem& x) const;

 private:
  Group group_;
  std::vector<Elem> points_;
  Neighborhood v_;
  std::int64_t spread_;
  std::vector<std::pair<Elem, std::int64_t>> lookup_;  // sorted by element
};

/// Sanity check of the group axioms: exhaustive on small cyclic carriers,
/// randomized triples on the lattice.
bool check_group_axioms(const Group& g, std::uint64_t seed = 1);

}  // namespace phasecover

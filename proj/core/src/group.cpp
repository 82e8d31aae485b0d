#include "phasecover/group.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace phasecover {

Elem elem(std::int64_t x0) {
  Elem e;
  e.c[0] = x0;
  return e;
}

Elem elem(std::int64_t x0, std::int64_t x1) {
  Elem e;
  e.c[0] = x0;
  e.c[1] = x1;
  return e;
}

Elem elem(std::span<const std::int64_t> coords) {
  if (coords.size() > static_cast<std::size_t>(kMaxDim))
    throw std::invalid_argument("elem: too many coordinates");
  Elem e;
  for (std::size_t i = 0; i < coords.size(); ++i) e.c[i] = coords[i];
  return e;
}

std::string to_string(const Elem& x, int dim) {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < dim; ++i) {
    if (i) os << ',';
    os << x.c[i];
  }
  os << ')';
  return os.str();
}

Group::Group(Kind k, int dim, std::int64_t modulus)
    : kind_(k), dim_(dim), modulus_(modulus) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("Group: dimension out of range");
  if (k == Kind::cyclic && modulus < 1) throw std::invalid_argument("Group: modulus must be positive");
}

Group Group::lattice(int dim) { return Group(Kind::lattice, dim, 0); }

Group Group::cyclic(int dim, std::int64_t modulus) {
  return Group(Kind::cyclic, dim, modulus);
}

Elem Group::canon(Elem x) const {
  if (kind_ == Kind::cyclic) {
    for (int i = 0; i < dim_; ++i) {
      std::int64_t r = x.c[i] % modulus_;
      if (r < 0) r += modulus_;
      x.c[i] = r;
    }
  }
  for (int i = dim_; i < kMaxDim; ++i) x.c[i] = 0;
  return x;
}

Elem Group::op(const Elem& a, const Elem& b) const {
  Elem r;
  for (int i = 0; i < dim_; ++i) r.c[i] = a.c[i] + b.c[i];
  return canon(r);
}

Elem Group::inverse(const Elem& a) const {
  Elem r;
  for (int i = 0; i < dim_; ++i) r.c[i] = -a.c[i];
  return canon(r);
}

Elem Group::min_residue(const Elem& x) const {
  Elem r = canon(x);
  if (kind_ == Kind::cyclic) {
    for (int i = 0; i < dim_; ++i) {
      if (2 * r.c[i] >= modulus_) r.c[i] -= modulus_;
    }
  }
  return r;
}

double Group::norm(const Elem& x) const {
  Elem r = min_residue(x);
  double s = 0;
  for (int i = 0; i < dim_; ++i) s += static_cast<double>(r.c[i]) * static_cast<double>(r.c[i]);
  return std::sqrt(s);
}

std::int64_t Group::size() const {
  if (kind_ == Kind::lattice) return 0;
  std::int64_t n = 1;
  for (int i = 0; i < dim_; ++i) n *= modulus_;
  return n;
}

std::vector<Elem> Group::all_elements() const {
  if (kind_ != Kind::cyclic) throw std::invalid_argument("all_elements: carrier is infinite");
  std::vector<Elem> out;
  out.reserve(static_cast<std::size_t>(size()));
  Elem cur{};
  for (;;) {
    out.push_back(cur);
    int i = dim_ - 1;
    for (; i >= 0; --i) {
      if (++cur.c[i] < modulus_) break;
      cur.c[i] = 0;
    }
    if (i < 0) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Elem> Group::box(std::int64_t radius) const {
  if (radius < 0) throw std::invalid_argument("box: negative radius");
  std::set<Elem> pts;
  std::vector<std::int64_t> idx(static_cast<std::size_t>(dim_), -radius);
  for (;;) {
    Elem e;
    for (int i = 0; i < dim_; ++i) e.c[i] = idx[static_cast<std::size_t>(i)];
    pts.insert(canon(e));
    int i = dim_ - 1;
    for (; i >= 0; --i) {
      if (++idx[static_cast<std::size_t>(i)] <= radius) break;
      idx[static_cast<std::size_t>(i)] = -radius;
    }
    if (i < 0) break;
  }
  return {pts.begin(), pts.end()};
}

Neighborhood::Neighborhood(const Group& g, std::vector<Elem> points) : group_(g) {
  std::set<Elem> pts;
  for (const Elem& p : points) pts.insert(g.canon(p));
  points_.assign(pts.begin(), pts.end());
  if (!std::binary_search(points_.begin(), points_.end(), g.identity()))
    throw std::invalid_argument("Neighborhood: must contain the identity");
  for (const Elem& p : points_) {
    if (!std::binary_search(points_.begin(), points_.end(), g.inverse(p)))
      throw std::invalid_argument("Neighborhood: must be symmetric");
  }
}

Neighborhood Neighborhood::box(const Group& g, std::int64_t radius) {
  return Neighborhood(g, g.box(radius));
}

bool Neighborhood::contains(const Elem& x) const {
  return std::binary_search(points_.begin(), points_.end(), group_.canon(x));
}

std::int64_t spreadness(std::span<const Elem> lambda, const Neighborhood& v) {
  if (lambda.empty()) throw std::invalid_argument("spreadness: empty node set");
  const Group& g = v.group();
  std::set<Elem> members;
  for (const Elem& l : lambda) members.insert(g.canon(l));
  // lambda `in` xV iff x `in` lambda V^{-1} = lambda V, so candidates for the
  // sup are exactly the translates lambda*u, u in V.
  std::int64_t best = 0;
  std::set<Elem> seen;
  for (const Elem& l : members) {
    for (const Elem& u : v.points()) {
      Elem x = g.op(l, u);
      if (!seen.insert(x).second) continue;
      std::int64_t count = 0;
      for (const Elem& t : v.points()) {
        if (members.count(g.op(x, t))) ++count;
      }
      best = std::max(best, count);
    }
  }
  return best;
}

RelSepSet::RelSepSet(const Group& g, std::vector<Elem> points, const Neighborhood& v)
    : group_(g), v_(v) {
  points_.reserve(points.size());
  for (const Elem& p : points) points_.push_back(g.canon(p));
  lookup_.reserve(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i)
    lookup_.emplace_back(points_[i], static_cast<std::int64_t>(i));
  std::sort(lookup_.begin(), lookup_.end());
  for (std::size_t i = 1; i < lookup_.size(); ++i) {
    if (lookup_[i].first == lookup_[i - 1].first)
      throw std::invalid_argument("RelSepSet: duplicate node " + to_string(lookup_[i].first, g.dim()));
  }
  spread_ = spreadness(points_, v);
}

std::int64_t RelSepSet::index_of(const Elem& x) const {
  Elem c = group_.canon(x);
  auto it = std::lower_bound(lookup_.begin(), lookup_.end(), c,
                             [](const auto& a, const Elem& b) { return a.first < b; });
  if (it == lookup_.end() || it->first != c) return -1;
  return it->second;
}

bool check_group_axioms(const Group& g, std::uint64_t seed) {
  auto check_triple = [&](const Elem& a, const Elem& b, const Elem& c) {
    if (g.op(g.op(a, b), c) != g.op(a, g.op(b, c))) return false;
    if (g.op(a, g.identity()) != g.canon(a)) return false;
    if (g.op(g.identity(), a) != g.canon(a)) return false;
    if (g.op(a, g.inverse(a)) != g.identity()) return false;
    return true;
  };
  if (g.kind() == Group::Kind::cyclic && g.size() > 0 && g.size() <= 16) {
    auto all = g.all_elements();
    for (const Elem& a : all)
      for (const Elem& b : all)
        for (const Elem& c : all)
          if (!check_triple(a, b, c)) return false;
    return true;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> coord(-1000, 1000);
  for (int t = 0; t < 200; ++t) {
    Elem a, b, c;
    for (int i = 0; i < g.dim(); ++i) {
      a.c[i] = coord(rng);
      b.c[i] = coord(rng);
      c.c[i] = coord(rng);
    }
    if (!check_triple(a, b, c)) return false;
  }
  return true;
}

}  // namespace phasecover

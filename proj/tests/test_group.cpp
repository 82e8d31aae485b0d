#include "doctest.h"
#include "oracles.hpp"
#include "phasecover/weight.hpp"

using namespace phasecover;

TEST_CASE("group axioms hold on both carriers") {
  CHECK(check_group_axioms(Group::cyclic(2, 4)));
  CHECK(check_group_axioms(Group::cyclic(1, 7)));
  CHECK(check_group_axioms(Group::lattice(2)));
  CHECK(check_group_axioms(Group::lattice(3)));
}

TEST_CASE("canonical representatives and residues") {
  Group g = Group::cyclic(1, 4);
  CHECK(g.canon(elem(-1)) == elem(3));
  CHECK(g.min_residue(elem(3)) == elem(-1));
  CHECK(g.norm(elem(3)) == doctest::Approx(1.0));
  Group z = Group::lattice(2);
  CHECK(z.canon(elem(-5, 2)) == elem(-5, 2));
  CHECK(z.norm(elem(3, 4)) == doctest::Approx(5.0));
}

TEST_CASE("translate: identity, lattice shift, modular shift") {
  Group z = Group::lattice(1);
  GFunc d0 = GFunc::delta(z, elem(0));
  CHECK(translate(d0, elem(0), Side::left).values() == d0.values());

  GFunc d3 = translate(d0, elem(3), Side::left);
  CHECK(d3.at(elem(3)) == Cplx(1.0));
  CHECK(d3.support_size() == 1);

  Group z4 = Group::cyclic(1, 4);
  std::vector<Elem> pts = {elem(2), elem(3)};
  GFunc chi = GFunc::indicator(z4, pts);
  GFunc shifted = translate(chi, elem(2), Side::left);
  CHECK(shifted.at(elem(0)) == Cplx(1.0));
  CHECK(shifted.at(elem(1)) == Cplx(1.0));
  CHECK(shifted.support_size() == 2);

  // Right translation moves support the other way: R_x f(y) = f(yx).
  GFunc right = translate(d0, elem(3), Side::right);
  CHECK(right.at(elem(-3)) == Cplx(1.0));
}

TEST_CASE("left and right translations commute on abelian carriers") {
  Group z = Group::lattice(2);
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    GFunc f = oracles::random_int_fn(z, 6, 10, rng);
    Elem x = elem(static_cast<std::int64_t>(rng.raw() % 7) - 3,
                  static_cast<std::int64_t>(rng.raw() % 7) - 3);
    Elem y = elem(static_cast<std::int64_t>(rng.raw() % 7) - 3,
                  static_cast<std::int64_t>(rng.raw() % 7) - 3);
    GFunc lr = translate(translate(f, y, Side::right), x, Side::left);
    GFunc rl = translate(translate(f, x, Side::left), y, Side::right);
    CHECK(lr.values() == rl.values());
  }
}

TEST_CASE("involute: fixed point, involution, point reflection") {
  Group z = Group::lattice(1);
  GFunc d0 = GFunc::delta(z, elem(0));
  CHECK(involute(d0).values() == d0.values());

  GFunc d3 = GFunc::delta(z, elem(3), Cplx(2.0, -1.0));
  GFunc inv = involute(d3);
  CHECK(inv.at(elem(-3)) == Cplx(2.0, -1.0));

  Rng rng(5);
  GFunc f = oracles::random_int_fn(z, 8, 12, rng);
  CHECK(involute(involute(f)).values() == f.values());
}

TEST_CASE("convolve: unit, hand expansions, carrier mismatch") {
  Group z = Group::lattice(1);
  Rng rng(7);
  GFunc f = oracles::random_int_fn(z, 6, 10, rng);
  GFunc d0 = GFunc::delta(z, elem(0));
  CHECK(convolve(d0, f).values() == f.values());

  std::vector<Elem> pts = {elem(0), elem(1)};
  GFunc chi = GFunc::indicator(z, pts);
  GFunc sq = convolve(chi, chi);
  CHECK(sq.at(elem(0)) == Cplx(1.0));
  CHECK(sq.at(elem(1)) == Cplx(2.0));
  CHECK(sq.at(elem(2)) == Cplx(1.0));
  CHECK(sq.support_size() == 3);

  Group z4 = Group::cyclic(1, 4);
  GFunc chi4 = GFunc::indicator(z4, pts);
  GFunc sq4 = convolve(chi4, chi4);
  CHECK(sq4.at(elem(0)) == Cplx(1.0));
  CHECK(sq4.at(elem(1)) == Cplx(2.0));
  CHECK(sq4.at(elem(2)) == Cplx(1.0));
  CHECK(sq4.at(elem(3)) == Cplx(0.0));

  CHECK_THROWS_AS(convolve(f, chi4), std::invalid_argument);
}

TEST_CASE("convolution matches the transform-route oracle") {
  Rng rng(23);
  for (const Group& g : {Group::cyclic(1, 16), Group::cyclic(2, 8)}) {
    for (int t = 0; t < 5; ++t) {
      GFunc f = oracles::random_gaussian_fn(g, 16, 12, rng);
      GFunc h = oracles::random_gaussian_fn(g, 16, 9, rng);
      GFunc direct = convolve(f, h);
      GFunc viafft = oracles::dft_convolve(f, h);
      double scale = std::max(1.0, sup_abs(direct));
      CHECK(oracles::max_abs_diff(direct, viafft) / scale < 1e-12);
    }
  }
}

TEST_CASE("involution is an anti-homomorphism of the convolution algebra") {
  Group z4 = Group::cyclic(2, 4);
  Rng rng(31);
  for (int t = 0; t < 20; ++t) {
    GFunc f = oracles::random_int_fn(z4, 3, 6, rng);
    GFunc g = oracles::random_int_fn(z4, 3, 6, rng);
    CHECK(involute(convolve(f, g)).values() == convolve(involute(g), involute(f)).values());
  }
}

TEST_CASE("spreadness: examples, oracle, monotonicity") {
  Group z = Group::lattice(1);
  Neighborhood v1 = Neighborhood::box(z, 1);
  std::vector<Elem> singleton = {elem(0)};
  CHECK(spreadness(singleton, v1) == 1);

  std::vector<Elem> evens;
  for (std::int64_t k = -8; k <= 8; k += 2) evens.push_back(elem(k));
  CHECK(spreadness(evens, v1) == 2);
  CHECK(spreadness(evens, v1) == oracles::brute_spreadness(evens, v1, 10));

  Neighborhood v2 = Neighborhood::box(z, 2);
  std::vector<Elem> dense;
  for (std::int64_t k = -4; k <= 4; ++k) dense.push_back(elem(k));
  CHECK(spreadness(dense, v2) == 5);
  CHECK(spreadness(dense, v2) == oracles::brute_spreadness(dense, v2, 8));

  // Monotone in the neighborhood.
  Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    std::vector<Elem> pts;
    for (int i = 0; i < 9; ++i)
      pts.push_back(elem(static_cast<std::int64_t>(rng.raw() % 21) - 10));
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    CHECK(spreadness(pts, v1) <= spreadness(pts, v2));
  }

  std::vector<Elem> empty;
  CHECK_THROWS_AS(spreadness(empty, v1), std::invalid_argument);
}

TEST_CASE("relatively separated sets cache their spreadness and reject duplicates") {
  Group z8 = Group::cyclic(1, 8);
  Neighborhood v = Neighborhood::box(z8, 1);
  RelSepSet nodes(z8, {elem(0), elem(2), elem(4), elem(6)}, v);
  CHECK(nodes.spread() == spreadness(nodes.points(), v));
  CHECK(nodes.index_of(elem(4)) == 2);
  CHECK(nodes.index_of(elem(5)) == -1);
  CHECK_THROWS_AS(RelSepSet(z8, {elem(1), elem(9)}, v), std::invalid_argument);
}

TEST_CASE("neighborhoods must be symmetric and contain the identity") {
  Group z = Group::lattice(1);
  CHECK_THROWS_AS(Neighborhood(z, {elem(1), elem(-1)}), std::invalid_argument);
  CHECK_THROWS_AS(Neighborhood(z, {elem(0), elem(1)}), std::invalid_argument);
  Neighborhood v(z, {elem(0), elem(1), elem(-1)});
  CHECK(v.size() == 3);
}

TEST_CASE("weight admissibility: constant, polynomial, exponential") {
  Group z = Group::lattice(1);
  auto one = check_weight_admissible(Weight::one(z), 8);
  CHECK(one.submultiplicative);
  CHECK(one.symmetric);
  CHECK(one.worst_ratio == doctest::Approx(1.0));

  auto poly = check_weight_admissible(Weight::polynomial(z, 2.0), 8);
  CHECK(poly.submultiplicative);
  CHECK(poly.symmetric);

  auto expw = check_weight_admissible(Weight::exponential(z, 2.0), 8);
  CHECK(expw.submultiplicative);
  CHECK(expw.symmetric);

  Group z8 = Group::cyclic(2, 8);
  auto cyc = check_weight_admissible(Weight::polynomial(z8, 1.0), 4);
  CHECK(cyc.submultiplicative);
  CHECK(cyc.symmetric);
}

TEST_CASE("growth condition: constants pass, polynomials need a deep tail, exponentials fail") {
  Group z = Group::lattice(1);
  std::vector<Elem> gens = {elem(1)};

  auto one = check_grs(Weight::one(z), gens);
  REQUIRE(one.size() == 1);
  for (double v : one[0].values) CHECK(v == doctest::Approx(1.0));
  CHECK(one[0].pass);

  // (1+n)^{1/n} decreases toward one, but at n = 64 it is still above the
  // 1.05 verdict line (65^{1/64} ~ 1.067); a deeper tail clears it.
  auto poly = check_grs(Weight::polynomial(z, 1.0), gens, 64);
  CHECK(poly[0].tail == doctest::Approx(std::pow(65.0, 1.0 / 64.0)));
  CHECK_FALSE(poly[0].pass);
  for (std::size_t i = 1; i < poly[0].values.size(); ++i)
    CHECK(poly[0].values[i] <= poly[0].values[i - 1] + 1e-12);
  auto poly_deep = check_grs(Weight::polynomial(z, 1.0), gens, 256);
  CHECK(poly_deep[0].pass);

  // 2^{|n|} has constant root sequence 2: submultiplicative but not GRS.
  auto expw = check_grs(Weight::exponential(z, 2.0), gens, 64);
  for (double v : expw[0].values) CHECK(v == doctest::Approx(2.0));
  CHECK_FALSE(expw[0].pass);
}

TEST_CASE("table weights evaluate with a fill value and reject nonpositive entries") {
  Group z4 = Group::cyclic(1, 4);
  Weight t = Weight::table(z4, {{elem(0), 2.0}, {elem(1), 3.0}}, 1.0);
  CHECK(t(elem(0)) == doctest::Approx(2.0));
  CHECK(t(elem(5)) == doctest::Approx(3.0));
  CHECK(t(elem(2)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(Weight::table(z4, {{elem(0), -1.0}}, 1.0), std::invalid_argument);
}

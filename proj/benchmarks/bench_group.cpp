#include <benchmark/benchmark.h>

#include "phasecover/rng.hpp"
#include "phasecover/spaces.hpp"

using namespace phasecover;

namespace {

GFunc dense_random(const Group& g, std::uint64_t seed) {
  Rng rng(seed);
  GFunc f(g);
  for (const Elem& x : g.all_elements()) f.set(x, rng.cnormal());
  return f;
}

void bm_convolve(benchmark::State& state) {
  Group g = Group::cyclic(1, state.range(0));
  GFunc f = dense_random(g, 1);
  GFunc h = dense_random(g, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(convolve(f, h));
  }
}
BENCHMARK(bm_convolve)->Arg(16)->Arg(32)->Arg(64);

void bm_local_max(benchmark::State& state) {
  Group g = Group::cyclic(2, state.range(0));
  GFunc f = dense_random(g, 3);
  Neighborhood v = Neighborhood::box(g, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(local_max(f, v, Side::left));
  }
}
BENCHMARK(bm_local_max)->Arg(16)->Arg(32);

void bm_amalgam_norm(benchmark::State& state) {
  Group g = Group::cyclic(2, state.range(0));
  GFunc f = dense_random(g, 4);
  Neighborhood v = Neighborhood::box(g, 1);
  SolidSpaceSpec e = SolidSpaceSpec::lp(g, 2, Weight::one(g), Weight::one(g));
  for (auto _ : state) {
    benchmark::DoNotOptimize(amalgam_norm(f, AmalgamKind::left, e, v));
  }
}
BENCHMARK(bm_amalgam_norm)->Arg(16)->Arg(32);

void bm_ed_norm(benchmark::State& state) {
  Group g = Group::cyclic(2, 16);
  Neighborhood v = Neighborhood::box(g, 1);
  std::vector<Elem> nodes;
  for (std::int64_t x = 0; x < 16; x += 2)
    for (std::int64_t s = 0; s < 16; s += 2) nodes.push_back(elem(x, s));
  RelSepSet lambda(g, nodes, v);
  Rng rng(5);
  DiscreteCoeffs c{lambda, {}};
  for (std::size_t i = 0; i < lambda.size(); ++i) c.values.push_back(rng.cnormal());
  SolidSpaceSpec e = SolidSpaceSpec::lp(g, 2, Weight::one(g), Weight::one(g));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ed_norm(c, e, v));
  }
}
BENCHMARK(bm_ed_norm);

}  // namespace

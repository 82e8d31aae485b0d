#include <benchmark/benchmark.h>

#include "phasecover/gabor.hpp"
#include "phasecover/rng.hpp"

using namespace phasecover;

namespace {

PartitionOfUnity plane_partition(const Group& plane) {
  std::vector<Elem> centers;
  for (std::int64_t x = 0; x < plane.modulus(); x += 4)
    for (std::int64_t s = 0; s < plane.modulus(); s += 4) centers.push_back(elem(x, s));
  return build_bupu(plane, centers, BupuProfile::raised_cosine, 8.0,
                    Neighborhood::box(plane, 1));
}

void bm_stft(benchmark::State& state) {
  std::int64_t n = state.range(0);
  Rng rng(1);
  Eigen::VectorXcd f(n);
  for (std::int64_t i = 0; i < n; ++i) f[i] = rng.cnormal();
  Eigen::VectorXcd h = gaussian_window(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(stft(f, h));
  }
}
BENCHMARK(bm_stft)->Arg(16)->Arg(32)->Arg(64);

void bm_gabor_system(benchmark::State& state) {
  std::int64_t n = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(make_gabor_system(n, 2, 2, gaussian_window(n)));
  }
}
BENCHMARK(bm_gabor_system)->Arg(8)->Arg(16);

void bm_projector_apply(benchmark::State& state) {
  GaborSystem gs = make_gabor_system(16, 2, 2, gaussian_window(16));
  Rng rng(2);
  GFunc f(gs.plane);
  for (const Elem& x : gs.plane.all_elements()) f.set(x, rng.cnormal());
  for (auto _ : state) {
    benchmark::DoNotOptimize(projector(gs.system, f));
  }
}
BENCHMARK(bm_projector_apply);

void bm_kernel_envelope(benchmark::State& state) {
  GaborSystem gs = make_gabor_system(state.range(0), 2, 2, gaussian_window(state.range(0)));
  Weight w = Weight::one(gs.plane);
  Neighborhood v = Neighborhood::box(gs.plane, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernel_envelope(gs.system, w, v));
  }
}
BENCHMARK(bm_kernel_envelope)->Arg(8)->Arg(16);

void bm_approx_projector_matrix(benchmark::State& state) {
  GaborSystem gs = make_gabor_system(16, 2, 2, gaussian_window(16));
  PartitionOfUnity pu = plane_partition(gs.plane);
  CoverWindow u{gs.plane, 4};
  for (auto _ : state) {
    benchmark::DoNotOptimize(approx_projector_matrix(gs.system, pu, u));
  }
}
BENCHMARK(bm_approx_projector_matrix);

void bm_cover_leakage(benchmark::State& state) {
  GaborSystem gs = make_gabor_system(16, 2, 2, gaussian_window(16));
  PartitionOfUnity pu = plane_partition(gs.plane);
  Neighborhood v = Neighborhood::box(gs.plane, 1);
  CoverWindow u{gs.plane, 4};
  for (auto _ : state) {
    benchmark::DoNotOptimize(cover_leakage(pu, u, v));
  }
}
BENCHMARK(bm_cover_leakage);

void bm_cd_norm(benchmark::State& state) {
  Group g = Group::cyclic(1, state.range(0));
  Neighborhood v = Neighborhood::box(g, 1);
  RelSepSet nodes(g, g.all_elements(), v);
  Weight w = Weight::polynomial(g, 0.5);
  Rng rng(3);
  const std::int64_t n = state.range(0);
  Eigen::MatrixXcd t(n, n);
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t j = 0; j < n; ++j) t(i, j) = rng.cnormal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(cd_norm(t, nodes, w, Side::right));
  }
}
BENCHMARK(bm_cd_norm)->Arg(16)->Arg(64);

}  // namespace

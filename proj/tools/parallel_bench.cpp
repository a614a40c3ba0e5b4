// Compares the OpenMP trial runner and affinity kernel against their serial
// references: verifies identical results, then reports wall times.
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "subspace/clustering.hpp"
#include "subspace/datagen.hpp"
#include "subspace/recovery.hpp"
#include "subspace/rng.hpp"
#include "subspace/trial_runner.hpp"

namespace {

double now_s() {
#ifdef _OPENMP
  return omp_get_wtime();
#else
  return static_cast<double>(clock()) / CLOCKS_PER_SEC;
#endif
}

int hardware_workers() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

long long recovery_trial(int t, const subspace::TheoryParams& params,
                         std::uint64_t seed) {
  subspace::RngStream rng(seed, static_cast<std::uint64_t>(t));
  subspace::SceneOptions opts;
  opts.audit_samples = 16;
  const subspace::Scene scene = subspace::make_scene(params, rng, opts);
  subspace::RansacConfig rc;
  return subspace::ransac_recover(scene.points, params.d, rc, rng).iterations;
}

void bench_trials(int trials, int workers, std::uint64_t seed) {
  subspace::TheoryParams params;
  params.d = 2;
  params.p = 10;
  params.m = 100;
  params.m0 = 100;

  auto fn = [&](int t) { return recovery_trial(t, params, seed); };

  double t0 = now_s();
  const std::vector<long long> serial =
      subspace::run_trials_serial(trials, fn);
  const double serial_s = now_s() - t0;

  t0 = now_s();
  const std::vector<long long> parallel =
      subspace::run_trials(trials, workers, fn);
  const double parallel_s = now_s() - t0;

  const bool equal = serial == parallel;
  std::printf("trial runner   %6d trials  serial %8.3fs  %2d workers %8.3fs"
              "  speedup %5.2fx  results %s\n",
              trials, serial_s, workers, parallel_s, serial_s / parallel_s,
              equal ? "identical" : "DIFFER");
}

void bench_affinity(int c, int workers, std::uint64_t seed) {
  subspace::TheoryParams params;
  params.d = 2;
  params.p = 8;
  params.m = 40;
  params.m0 = 40;
  params.K = 3;
  subspace::RngStream scene_rng(seed, 0);
  subspace::SceneOptions opts;
  opts.audit_samples = 16;
  const subspace::Scene scene = subspace::make_scene(params, scene_rng, opts);

  subspace::RngStream rng_a(seed, 1);
  double t0 = now_s();
  const subspace::AffinityMatrix serial = subspace::scc_affinity_serial(
      scene.points, params.d, c, subspace::kDefaultRelTol, rng_a);
  const double serial_s = now_s() - t0;

  subspace::RngStream rng_b(seed, 1);
  t0 = now_s();
  const subspace::AffinityMatrix parallel = subspace::scc_affinity(
      scene.points, params.d, c, subspace::kDefaultRelTol, rng_b, workers);
  const double parallel_s = now_s() - t0;

  const bool equal = serial.w == parallel.w;
  std::printf("scc affinity   %6d tuples  serial %8.3fs  %2d workers %8.3fs"
              "  speedup %5.2fx  results %s\n",
              c, serial_s, workers, parallel_s, serial_s / parallel_s,
              equal ? "identical" : "DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
  bool quick = false;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--quick") == 0) quick = true;

  const int workers = hardware_workers();
  const std::uint64_t seed = 7;
  std::printf("workers available: %d\n", workers);
  bench_trials(quick ? 200 : 4000, workers, seed);
  bench_affinity(quick ? 200 : 4000, workers, seed);
  return 0;
}

// Throughput comparison of the OpenMP tensor-apply kernel against the serial
// reference, plus a power-iteration timing. Run with different
// OMP_NUM_THREADS settings to see scaling; results are bitwise identical
// either way.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tgap/experiment.hpp"
#include "tgap/rng.hpp"
#include "tgap/tensorop.hpp"

using namespace tgap;

namespace {

double seconds_per_apply(const TensorSumOperator& op, bool parallel, int reps) {
  std::vector<cdouble> v(op.dim()), w(op.dim());
  PortableRng rng(42);
  rng.fill(v);
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) {
    if (parallel)
      op.apply(v, w);
    else
      op.apply_serial(v, w);
    std::swap(v, w);
  }
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count() / reps;
}

TensorSumOperator make_pair_op(std::uint64_t k, std::uint64_t kprime, int m) {
  auto make_rep = [](std::uint64_t kk) {
    auto ring = FiniteRing::zmod(kk);
    auto G = IndexedGroup::full(ring);
    auto c = phase_family(extend_to_semidirect(symplectic_cocycle(ring), G));
    return regular_rep(G, c);
  };
  return tensor_sum(make_rep(k), make_rep(kprime), generator_words(m));
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif
  std::printf("%-12s %-10s %12s %12s %9s\n", "operator", "dim", "serial s", "parallel s",
              "speedup");
  const int m = 3;
  const std::pair<std::uint64_t, std::uint64_t> cases[] = {{3, 3}, {3, 4}, {4, 4}};
  for (const auto& [k, kp] : cases) {
    const TensorSumOperator op = make_pair_op(k, kp, m);
    const int reps = op.dim() > 300'000 ? 5 : 20;
    const double ts = seconds_per_apply(op, false, reps);
    const double tp = seconds_per_apply(op, true, reps);
    char name[32];
    std::snprintf(name, sizeof(name), "(%llu,%llu)", static_cast<unsigned long long>(k),
                  static_cast<unsigned long long>(kp));
    std::printf("%-12s %-10llu %12.6f %12.6f %8.2fx\n", name,
                static_cast<unsigned long long>(op.dim()), ts, tp, ts / tp);
  }

  // end-to-end: one seeded norm estimate on the (3,4) tensor operator
  const TensorSumOperator op = make_pair_op(3, 4, m);
  SpectralOptions opts;
  opts.seeds = {1};
  const auto t0 = std::chrono::steady_clock::now();
  const NormEstimate est = norm_power(op.handle(), opts);
  const auto t1 = std::chrono::steady_clock::now();
  std::printf("\nnorm_power (3,4): value %.9f residual %.2e iters %llu in %.2fs\n", est.value,
              est.residual, static_cast<unsigned long long>(est.iterations),
              std::chrono::duration<double>(t1 - t0).count());
  return 0;
}

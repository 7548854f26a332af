// SPDX-License-Identifier: Apache-2.0
//
// Serial vs OpenMP timings for the skew spark audit and genericity trials.
// Usage: bench_audit [repeats]
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include <omp.h>

#include "nilbridge/fixtures.hpp"
#include "nilbridge/spark_lab.hpp"

using namespace nilbridge;

namespace {

double best_ms(int repeats, const std::function<void()>& body) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (ms < best) best = ms;
  }
  return best;
}

void row(const char* name, int repeats, const std::function<void(Execution)>& body) {
  const double s = best_ms(repeats, [&] { body(Execution::serial); });
  const double p = best_ms(repeats, [&] { body(Execution::parallel); });
  std::printf("%-34s %10.2f %10.2f %8.2fx\n", name, s, p, s / p);
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::atoi(argv[1]) : 3;
  std::printf("threads: %d, repeats: %d\n", omp_get_max_threads(), repeats);
  std::printf("%-34s %10s %10s %9s\n", "case", "serial ms", "omp ms", "speedup");

  Rng rng = make_rng(77);
  const Frame f = random_full_spark_frame(5, 12, rng, Field::complex);
  const DualFramePair pair(f, random_dual(f, rng()));
  std::size_t checked = 0;
  row("audit n=5 N=12 k<=5", repeats, [&](Execution e) {
    checked = skew_spark_audit(pair, 5, {}, 1e8, e).matrices_checked;
  });
  std::printf("  (%zu bridge matrices per audit)\n", checked);

  row("genericity n=2 N=4 k=2, 2000 trials", repeats,
      [&](Execution e) { genericity_trial(2, 4, 2000, 2, 5, Field::real, {}, e); });
  row("genericity n=3 N=8 k=3, 200 trials", repeats,
      [&](Execution e) { genericity_trial(3, 8, 200, 3, 5, Field::complex, {}, e); });
  return 0;
}

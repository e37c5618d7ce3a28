// Copyright netclust contributors.
// SPDX-License-Identifier: Apache-2.0

// Compares the serial reference and the OpenMP partition-scan kernels on a
// synthesized graph whose almost equitable partitions are known by
// construction. Build target: bench_partition_scan.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "netclust/netgraph.hpp"
#include "netclust/partition.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

netclust::NetworkGraph make_graph(int n) {
  // Three cells with uniform masses, complete-bipartite overlays, plus a few
  // intra-cell edges; sizes split n as evenly as possible.
  netclust::QuotientSpec spec;
  const int base = n / 3;
  const std::vector<int> sizes = {base, base, n - 2 * base};
  const std::vector<double> cell_mass = {1.0, 2.0, 0.5};
  for (int c = 0; c < 3; ++c) {
    netclust::QuotientSpec::CellSpec cell;
    cell.masses.assign(sizes[c], cell_mass[c]);
    spec.cells.push_back(cell);
  }
  spec.inter = {{0, 1, 1.0, netclust::EdgeKind::Damper},
                {1, 2, 0.5, netclust::EdgeKind::Damper},
                {0, 2, 2.0, netclust::EdgeKind::Damper}};
  for (int c = 0; c < 3; ++c) {
    if (sizes[c] >= 2)
      spec.intra.push_back({c, 0, 1, 0.75, netclust::EdgeKind::Damper});
  }
  spec.inputs = {0};
  return netclust::synthesize_aep_graph(spec).first;
}

}  // namespace

int main(int argc, char** argv) {
  int n = 11;
  int reps = 3;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--n" && i + 1 < argc) n = std::atoi(argv[++i]);
    if (arg == "--reps" && i + 1 < argc) reps = std::atoi(argv[++i]);
  }
  if (n < 3 || n > 12) {
    std::fprintf(stderr, "usage: bench_partition_scan [--n 3..12] [--reps R]\n");
    return 2;
  }

  const netclust::NetworkGraph g = make_graph(n);
#ifdef _OPENMP
  const int threads = omp_get_max_threads();
#else
  const int threads = 1;
#endif
  std::printf("AEP enumeration over all set partitions, n=%d, %d thread(s)\n", n, threads);
  std::printf("%-10s %-12s %-12s %-10s\n", "kernel", "best [s]", "mean [s]", "found");

  double serial_best = 0.0;
  std::vector<netclust::Partition> reference;
  for (const bool parallel : {false, true}) {
    double best = 1e300;
    double total = 0.0;
    std::vector<netclust::Partition> result;
    for (int r = 0; r < reps; ++r) {
      const auto start = Clock::now();
      result = parallel ? netclust::enumerate_aeps(g)
                        : netclust::enumerate_aeps_serial(g);
      const double elapsed = seconds_since(start);
      best = std::min(best, elapsed);
      total += elapsed;
    }
    std::printf("%-10s %-12.4f %-12.4f %zu\n", parallel ? "openmp" : "serial", best,
                total / reps, result.size());
    if (!parallel) {
      serial_best = best;
      reference = std::move(result);
    } else {
      if (best > 0.0) std::printf("speedup    %.2fx\n", serial_best / best);
      // The two kernels must agree element for element.
      if (reference != result) {
        std::fprintf(stderr, "kernel outputs disagree\n");
        return 1;
      }
    }
  }
  return 0;
}

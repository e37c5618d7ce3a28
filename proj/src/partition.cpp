// Copyright netclust contributors.
// SPDX-License-Identifier: Apache-2.0

#include "netclust/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace netclust {

Partition Partition::of(std::vector<std::vector<int>> cells, int n) {
  if (n <= 0) throw InputError("partition needs a positive vertex count");
  std::vector<int> seen(n, 0);
  for (auto& cell : cells) {
    if (cell.empty()) throw InputError("partition cells must be nonempty");
    std::sort(cell.begin(), cell.end());
    for (int v : cell) {
      if (v < 0 || v >= n) throw InputError("partition cell vertex out of range");
      if (seen[v]++) throw InputError("partition cells overlap");
    }
  }
  for (int v = 0; v < n; ++v) {
    if (!seen[v]) throw InputError("partition cells do not cover the vertex set");
  }
  std::sort(cells.begin(), cells.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  Partition part;
  part.cells = std::move(cells);
  return part;
}

Partition Partition::singletons(int n) {
  std::vector<std::vector<int>> cells(n);
  for (int v = 0; v < n; ++v) cells[v] = {v};
  return of(std::move(cells), n);
}

Partition Partition::one_cell(int n) {
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  return of({std::move(all)}, n);
}

Partition Partition::from_rgs(const std::vector<int>& rgs) {
  const int n = static_cast<int>(rgs.size());
  const int ncells = n ? *std::max_element(rgs.begin(), rgs.end()) + 1 : 0;
  std::vector<std::vector<int>> cells(ncells);
  for (int v = 0; v < n; ++v) cells[rgs[v]].push_back(v);
  return of(std::move(cells), n);
}

int Partition::num_vertices() const {
  int n = 0;
  for (const auto& cell : cells) n += static_cast<int>(cell.size());
  return n;
}

std::vector<int> Partition::cell_index() const {
  std::vector<int> idx(num_vertices(), -1);
  for (int c = 0; c < num_cells(); ++c) {
    for (int v : cells[c]) idx[v] = c;
  }
  return idx;
}

bool partition_less(const Partition& a, const Partition& b) {
  return a.cell_index() < b.cell_index();
}

Partition compose_partitions(const Partition& outer, const Partition& inner) {
  if (inner.num_vertices() != outer.num_cells())
    throw InputError("inner partition must act on the outer partition's cells");
  std::vector<std::vector<int>> cells;
  cells.reserve(inner.num_cells());
  for (const auto& group : inner.cells) {
    std::vector<int> merged;
    for (int c : group)
      merged.insert(merged.end(), outer.cells[c].begin(), outer.cells[c].end());
    cells.push_back(std::move(merged));
  }
  return Partition::of(std::move(cells), outer.num_vertices());
}

Matrix characteristic_matrix(const Partition& part, int n) {
  if (part.num_vertices() != n) throw InputError("partition does not match vertex count");
  Matrix p = Matrix::Zero(n, part.num_cells());
  for (int c = 0; c < part.num_cells(); ++c) {
    for (int v : part.cells[c]) p(v, c) = 1.0;
  }
  return p;
}

namespace {

// Effective-weight sums shared by the combinatorial check and the
// enumeration kernel: sums(i, q) accumulates w_e / m_i over filtered edges
// from i into cell q != cell(i). One pass over the edge list keeps the
// floating-point evaluation identical everywhere. The matrix may be wider
// than the cell count (preallocated scratch).
void accumulate_sums(const NetworkGraph& g, const std::vector<int>& edge_idx,
                     const std::vector<int>& cell_of, Matrix& sums) {
  for (int e : edge_idx) {
    const Edge& edge = g.edges[e];
    const int ct = cell_of[edge.tail];
    const int ch = cell_of[edge.head];
    if (ct == ch) continue;
    sums(edge.tail, ch) += edge.weight / g.masses[edge.tail];
    sums(edge.head, ct) += edge.weight / g.masses[edge.head];
  }
}

struct PairAgg {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  double total = 0.0;
};

bool definition_verdict(const Matrix& sums, const std::vector<int>& cell_of,
                        const std::vector<int>& cell_size, int ncells, double tol,
                        std::vector<PairAgg>* agg_out, double* max_rel_out) {
  std::vector<PairAgg> agg(static_cast<size_t>(ncells) * ncells);
  const int n = static_cast<int>(cell_of.size());
  for (int v = 0; v < n; ++v) {
    const int p = cell_of[v];
    for (int q = 0; q < ncells; ++q) {
      if (q == p) continue;
      PairAgg& a = agg[static_cast<size_t>(p) * ncells + q];
      const double s = sums(v, q);
      a.min = std::min(a.min, s);
      a.max = std::max(a.max, s);
      a.total += s;
    }
  }
  bool ok = true;
  double max_rel = 0.0;
  for (int p = 0; p < ncells; ++p) {
    for (int q = 0; q < ncells; ++q) {
      if (p == q) continue;
      const PairAgg& a = agg[static_cast<size_t>(p) * ncells + q];
      const double mean = a.total / cell_size[p];
      const double spread = a.max - a.min;
      const double rel = spread / (1.0 + std::abs(mean));
      max_rel = std::max(max_rel, rel);
      if (rel > tol) ok = false;
    }
  }
  if (agg_out) *agg_out = std::move(agg);
  if (max_rel_out) *max_rel_out = max_rel;
  return ok;
}

double subspace_residual(const NetworkGraph& g, const Partition& part, KindFilter kind) {
  const int n = g.n;
  const Matrix p = characteristic_matrix(part, n);
  const Matrix leff_p = effective_laplacian(g, kind) * p;
  Vector inv_sizes(part.num_cells());
  for (int c = 0; c < part.num_cells(); ++c)
    inv_sizes[c] = 1.0 / static_cast<double>(part.cells[c].size());
  const Matrix projected = p * (inv_sizes.asDiagonal() * (p.transpose() * leff_p));
  const double denom = std::max(1.0, leff_p.norm());
  return (leff_p - projected).norm() / denom;
}

AepWitness make_witness(const NetworkGraph& g, const Partition& part, KindFilter kind,
                        double tol) {
  g.validate();
  if (part.num_vertices() != g.n) throw InputError("partition does not match the network");

  AepWitness w;
  w.tol = tol;
  const int ncells = part.num_cells();
  const std::vector<int> cell_of = part.cell_index();
  std::vector<int> cell_size(ncells);
  for (int c = 0; c < ncells; ++c) cell_size[c] = static_cast<int>(part.cells[c].size());

  w.sums = Matrix::Zero(g.n, ncells);
  accumulate_sums(g, edge_indices(g, kind), cell_of, w.sums);

  std::vector<PairAgg> agg;
  definition_verdict(w.sums, cell_of, cell_size, ncells, tol, &agg, &w.max_relative_spread);
  for (int p = 0; p < ncells; ++p) {
    for (int q = 0; q < ncells; ++q) {
      if (p == q) continue;
      const PairAgg& a = agg[static_cast<size_t>(p) * ncells + q];
      AepWitness::PairStat stat;
      stat.p = p;
      stat.q = q;
      stat.value = a.total / cell_size[p];
      stat.min_sum = a.min;
      stat.max_sum = a.max;
      stat.spread = a.max - a.min;
      w.pairs.push_back(stat);
    }
  }
  w.subspace_residual = subspace_residual(g, part, kind);
  return w;
}

}  // namespace

AepWitness check_aep_definition(const NetworkGraph& g, const Partition& part,
                                KindFilter kind, double tol) {
  AepWitness w = make_witness(g, part, kind, tol);
  w.verdict = w.max_relative_spread <= tol;
  return w;
}

AepWitness check_aep_subspace(const NetworkGraph& g, const Partition& part,
                              KindFilter kind, double tol) {
  AepWitness w = make_witness(g, part, kind, tol);
  w.verdict = w.subspace_residual <= tol;
  return w;
}

void for_each_rgs(int n, const std::function<void(const std::vector<int>&, int)>& visit) {
  if (n <= 0) throw InputError("for_each_rgs needs a positive vertex count");
  std::vector<int> a(n, 0);    // cell index per vertex, a[0] == 0
  std::vector<int> m(n, 0);    // m[i] = max(a[0..i-1])
  for (;;) {
    visit(a, std::max(m[n - 1], a[n - 1]) + 1);
    int i = n - 1;
    while (i > 0 && a[i] > m[i]) --i;  // a[i] == m[i] + 1 cannot grow
    if (i == 0) return;
    ++a[i];
    for (int j = i + 1; j < n; ++j) {
      m[j] = std::max(m[j - 1], a[j - 1]);
      a[j] = 0;
    }
  }
}

namespace {

// Per-thread scratch for the enumeration kernel; avoids reallocating the
// sum and aggregate tables for every candidate partition.
struct ScanContext {
  const NetworkGraph* g = nullptr;
  std::vector<int> edge_idx;
  double tol = kDefaultTol;
  Matrix sums;
  std::vector<int> cell_size;

  bool accept(const std::vector<int>& rgs, int ncells) {
    const int n = static_cast<int>(rgs.size());
    sums.topLeftCorner(n, ncells).setZero();
    accumulate_sums(*g, edge_idx, rgs, sums);
    cell_size.assign(ncells, 0);
    for (int v = 0; v < n; ++v) ++cell_size[rgs[v]];
    return definition_verdict(sums, rgs, cell_size, ncells, tol, nullptr, nullptr);
  }
};

// Enumerates completions of a fixed restricted-growth prefix in
// lexicographic order.
void scan_suffix(std::vector<int>& a, std::vector<int>& m, int prefix_len,
                 ScanContext& ctx, std::vector<Partition>& hits) {
  const int n = static_cast<int>(a.size());
  for (int j = prefix_len; j < n; ++j) {
    m[j] = std::max(m[j - 1], a[j - 1]);
    a[j] = 0;
  }
  for (;;) {
    const int ncells = std::max(m[n - 1], a[n - 1]) + 1;
    if (ctx.accept(a, ncells)) hits.push_back(Partition::from_rgs(a));
    int i = n - 1;
    while (i >= prefix_len && a[i] > m[i]) --i;
    if (i < prefix_len) return;
    ++a[i];
    for (int j = i + 1; j < n; ++j) {
      m[j] = std::max(m[j - 1], a[j - 1]);
      a[j] = 0;
    }
  }
}

std::vector<Partition> enumerate_impl(const NetworkGraph& g, KindFilter kind, double tol,
                                      int max_n, bool parallel) {
  g.validate();
  if (g.n > max_n)
    throw InputError("enumeration refused: vertex count " + std::to_string(g.n) +
                     " exceeds the cap of " + std::to_string(max_n));

  const std::vector<int> edge_idx = edge_indices(g, kind);
  const int n = g.n;

  // Parallel plan: enumerate all restricted-growth prefixes of a fixed
  // length, expand each prefix independently, then splice the per-prefix
  // hits back in prefix order. The output equals the serial order for any
  // thread count.
  const int prefix_len = std::min(n, 7);
  if (!parallel || n <= prefix_len) {
    ScanContext ctx{&g, edge_idx, tol, Matrix::Zero(n, n), {}};
    std::vector<Partition> hits;
    std::vector<int> a(n, 0), m(n, 0);
    scan_suffix(a, m, 1, ctx, hits);  // a[0] == 0 is the whole prefix
    return hits;
  }

  std::vector<std::vector<int>> prefixes;
  for_each_rgs(prefix_len, [&](const std::vector<int>& rgs, int) {
    prefixes.push_back(rgs);
  });

  std::vector<std::vector<Partition>> chunk(prefixes.size());
#ifdef _OPENMP
#pragma omp parallel
  {
    ScanContext ctx{&g, edge_idx, tol, Matrix::Zero(n, n), {}};
    std::vector<int> a(n, 0), m(n, 0);
#pragma omp for schedule(dynamic, 8)
    for (int pi = 0; pi < static_cast<int>(prefixes.size()); ++pi) {
      std::copy(prefixes[pi].begin(), prefixes[pi].end(), a.begin());
      for (int j = 1; j < prefix_len; ++j) m[j] = std::max(m[j - 1], a[j - 1]);
      scan_suffix(a, m, prefix_len, ctx, chunk[pi]);
    }
  }
#else
  {
    ScanContext ctx{&g, edge_idx, tol, Matrix::Zero(n, n), {}};
    std::vector<int> a(n, 0), m(n, 0);
    for (size_t pi = 0; pi < prefixes.size(); ++pi) {
      std::copy(prefixes[pi].begin(), prefixes[pi].end(), a.begin());
      for (int j = 1; j < prefix_len; ++j) m[j] = std::max(m[j - 1], a[j - 1]);
      scan_suffix(a, m, prefix_len, ctx, chunk[pi]);
    }
  }
#endif

  std::vector<Partition> hits;
  for (auto& c : chunk)
    for (auto& p : c) hits.push_back(std::move(p));
  return hits;
}

}  // namespace

std::vector<Partition> enumerate_aeps(const NetworkGraph& g, KindFilter kind, double tol,
                                      int max_n) {
  return enumerate_impl(g, kind, tol, max_n, true);
}

std::vector<Partition> enumerate_aeps_serial(const NetworkGraph& g, KindFilter kind,
                                             double tol, int max_n) {
  return enumerate_impl(g, kind, tol, max_n, false);
}

std::pair<NetworkGraph, Partition> synthesize_aep_graph(const QuotientSpec& spec) {
  if (spec.cells.empty()) throw InputError("quotient spec needs at least one cell");
  const int ncells = static_cast<int>(spec.cells.size());

  std::vector<int> offset(ncells + 1, 0);
  for (int c = 0; c < ncells; ++c) {
    const auto& masses = spec.cells[c].masses;
    if (masses.empty()) throw InputError("quotient spec cell has no vertices");
    for (double mv : masses) {
      if (mv != masses.front())
        throw InputError("refused: masses within a cell must be uniform");
    }
    offset[c + 1] = offset[c] + static_cast<int>(masses.size());
  }
  const int n = offset[ncells];

  NetworkGraph g;
  g.n = n;
  g.masses.resize(n);
  std::vector<std::vector<int>> cells(ncells);
  for (int c = 0; c < ncells; ++c) {
    for (int k = 0; k < static_cast<int>(spec.cells[c].masses.size()); ++k) {
      g.masses[offset[c] + k] = spec.cells[c].masses[k];
      cells[c].push_back(offset[c] + k);
    }
  }

  for (const auto& ie : spec.inter) {
    if (ie.p < 0 || ie.p >= ncells || ie.q < 0 || ie.q >= ncells || ie.p == ie.q)
      throw InputError("quotient spec inter-cell pair out of range");
    for (int a : cells[ie.p]) {
      for (int b : cells[ie.q]) {
        g.edges.push_back({std::min(a, b), std::max(a, b), ie.weight, ie.kind});
      }
    }
  }
  for (const auto& ia : spec.intra) {
    if (ia.cell < 0 || ia.cell >= ncells) throw InputError("quotient spec intra cell out of range");
    const int sz = static_cast<int>(cells[ia.cell].size());
    if (ia.i < 0 || ia.i >= sz || ia.j < 0 || ia.j >= sz || ia.i == ia.j)
      throw InputError("quotient spec intra-cell edge out of range");
    const int a = cells[ia.cell][ia.i];
    const int b = cells[ia.cell][ia.j];
    g.edges.push_back({std::min(a, b), std::max(a, b), ia.weight, ia.kind});
  }
  g.forced = spec.inputs;
  g.validate();

  return {std::move(g), Partition::of(std::move(cells), n)};
}

}  // namespace netclust

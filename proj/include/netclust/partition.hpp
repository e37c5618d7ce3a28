// Copyright netclust contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "netclust/netgraph.hpp"
#include "netclust/types.hpp"

namespace netclust {

/// Ordered partition of {0..n-1} into disjoint nonempty cells, kept in
/// canonical form: each cell sorted ascending, cells ordered by smallest
/// element.
struct Partition {
  std::vector<std::vector<int>> cells;

  /// Validates against the vertex count and canonicalizes. Throws
  /// InputError on overlapping, empty, or incomplete cells.
  static Partition of(std::vector<std::vector<int>> cells, int n);
  static Partition singletons(int n);
  static Partition one_cell(int n);
  /// Builds the partition whose cell indices are the given restricted
  /// growth string (cell_index[v] for v = 0..n-1).
  static Partition from_rgs(const std::vector<int>& rgs);

  int num_cells() const { return static_cast<int>(cells.size()); }
  int num_vertices() const;
  /// vertex -> cell index map (the restricted growth string of the
  /// canonical form).
  std::vector<int> cell_index() const;

  bool operator==(const Partition& other) const { return cells == other.cells; }
};

/// Lexicographic order on the canonical cell-index strings; the stable tie
/// break used for deterministic listings.
bool partition_less(const Partition& a, const Partition& b);

/// Coarsen `outer` by `inner`: cell j of the result is the union of the
/// outer cells grouped by inner cell j. Characteristic matrices multiply.
Partition compose_partitions(const Partition& outer, const Partition& inner);

/// n x n_cells binary characteristic matrix P: one 1 per row, P*ones = ones,
/// P^T P = diag(cell sizes).
Matrix characteristic_matrix(const Partition& part, int n);

/// Almost-equitability evidence. `sums(i, q)` is the total effective weight
/// vertex i receives from cell q over the filtered edges; the pair table
/// aggregates those sums per ordered cell pair. `subspace_residual` is
/// ||(I - P(P^T P)^{-1} P^T) L_eff P||_F / max(1, ||L_eff P||_F).
struct AepWitness {
  struct PairStat {
    int p = 0;
    int q = 0;
    double value = 0.0;  // mean per-vertex sum, the w_pq candidate
    double min_sum = 0.0;
    double max_sum = 0.0;
    double spread = 0.0;
  };

  bool verdict = false;
  double tol = kDefaultTol;
  Matrix sums;                  // n x n_cells
  std::vector<PairStat> pairs;  // all ordered pairs p != q
  double max_relative_spread = 0.0;
  double subspace_residual = 0.0;
};

/// Combinatorial check: for every ordered cell pair (p, q), p != q, the
/// per-vertex effective-weight sums toward C_q must agree across C_p within
/// tol * (1 + |w_pq|).
AepWitness check_aep_definition(const NetworkGraph& g, const Partition& part,
                                KindFilter kind = KindFilter::All,
                                double tol = kDefaultTol);

/// Invariant-subspace check: verdict is subspace_residual <= tol. Agrees
/// with the combinatorial check.
AepWitness check_aep_subspace(const NetworkGraph& g, const Partition& part,
                              KindFilter kind = KindFilter::All,
                              double tol = kDefaultTol);

/// Visits every set partition of {0..n-1} in restricted-growth
/// (lexicographic) order. `visit(rgs, ncells)` receives the cell index of
/// each vertex; the buffer is reused between calls.
void for_each_rgs(int n, const std::function<void(const std::vector<int>&, int)>& visit);

/// All almost equitable partitions of g (combinatorial criterion), in
/// restricted-growth order. Parallelized over restricted-growth prefixes;
/// the output order does not depend on the thread count. Throws InputError
/// when g.n exceeds max_n (Bell numbers explode past 12).
std::vector<Partition> enumerate_aeps(const NetworkGraph& g,
                                      KindFilter kind = KindFilter::All,
                                      double tol = kDefaultTol, int max_n = 12);

/// Single-threaded reference implementation of enumerate_aeps; kept for
/// testing and benchmarking against the parallel kernel.
std::vector<Partition> enumerate_aeps_serial(const NetworkGraph& g,
                                             KindFilter kind = KindFilter::All,
                                             double tol = kDefaultTol,
                                             int max_n = 12);

/// Construction recipe for a graph with a known almost equitable partition:
/// cells with uniform vertex masses, complete-bipartite inter-cell edge
/// overlays, and arbitrary intra-cell edges (the definition constrains only
/// distinct cells).
struct QuotientSpec {
  struct CellSpec {
    std::vector<double> masses;  // one entry per vertex; must be uniform
  };
  struct InterEdge {
    int p = 0;  // cell indices, p != q
    int q = 0;
    double weight = 0.0;  // weight of every edge of the C_p x C_q overlay
    EdgeKind kind = EdgeKind::Damper;
  };
  struct IntraEdge {
    int cell = 0;
    int i = 0;  // local vertex indices within the cell
    int j = 0;
    double weight = 0.0;
    EdgeKind kind = EdgeKind::Damper;
  };

  std::vector<CellSpec> cells;
  std::vector<InterEdge> inter;
  std::vector<IntraEdge> intra;
  std::vector<int> inputs;  // global vertex indices, cells laid out in order
};

/// Realizes the recipe as (graph, partition). The partition is almost
/// equitable by construction; non-uniform masses within a cell are refused.
std::pair<NetworkGraph, Partition> synthesize_aep_graph(const QuotientSpec& spec);

}  // namespace netclust

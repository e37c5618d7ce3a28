// Copyright netclust contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "netclust/types.hpp"

namespace netclust {

enum class EdgeKind { Damper, Spring };

/// Edge selector used by all matrix builders.
enum class KindFilter { Damper, Spring, All };

bool matches(EdgeKind kind, KindFilter filter);
std::string to_string(EdgeKind kind);

struct Edge {
  int tail = 0;
  int head = 0;
  double weight = 0.0;
  EdgeKind kind = EdgeKind::Damper;
};

/// Vertex- and edge-weighted network. Vertices carry strictly positive
/// masses, edges carry a nonnegative weight, an explicit orientation and a
/// damper/spring tag, and `forced` lists one vertex per input column
/// (repeats allowed). Indices are 0-based in memory; file formats are
/// 1-based with conversion at the I/O boundary.
struct NetworkGraph {
  int n = 0;
  Vector masses;
  std::vector<Edge> edges;
  std::vector<int> forced;

  /// Throws InputError if any structural invariant is violated.
  void validate() const;

  double total_mass() const { return masses.sum(); }
  int num_inputs() const { return static_cast<int>(forced.size()); }
};

/// Indices into g.edges matching the filter, in stored order.
std::vector<int> edge_indices(const NetworkGraph& g, KindFilter kind);

/// n x k incidence matrix over the filtered edges: one -1 at the tail row
/// and one +1 at the head row per column. An empty filter yields n x 0.
Matrix incidence_matrix(const NetworkGraph& g, KindFilter kind = KindFilter::All);

/// Diagonal of the edge-weight matrix R over the filtered edges.
Vector edge_weights(const NetworkGraph& g, KindFilter kind = KindFilter::All);

/// Weighted Laplacian L = D R D^T. Symmetric PSD, L * ones = 0, and
/// independent of the stored edge orientations.
Matrix weighted_laplacian(const NetworkGraph& g, KindFilter kind = KindFilter::All);

/// Effective Laplacian M^{-1} L: entry (i,j), i != j, is minus the total
/// effective weight (weight per unit mass of the receiving vertex) that i
/// receives from edges {i,j}.
Matrix effective_laplacian(const NetworkGraph& g, KindFilter kind = KindFilter::All);

/// n x m input matrix E with a single 1 per column at the forced vertex.
Matrix input_matrix(const NetworkGraph& g);

/// Connectivity of the subgraph of filtered edges with strictly positive
/// weight. Zero-weight edges never connect.
bool is_connected(const NetworkGraph& g, KindFilter kind = KindFilter::All);

}  // namespace netclust

// Copyright netclust contributors.
// SPDX-License-Identifier: Apache-2.0

#include "netclust/netgraph.hpp"

#include <cmath>
#include <numeric>
#include <vector>

namespace netclust {

bool matches(EdgeKind kind, KindFilter filter) {
  switch (filter) {
    case KindFilter::All:
      return true;
    case KindFilter::Damper:
      return kind == EdgeKind::Damper;
    case KindFilter::Spring:
      return kind == EdgeKind::Spring;
  }
  return false;
}

std::string to_string(EdgeKind kind) {
  return kind == EdgeKind::Damper ? "damper" : "spring";
}

void NetworkGraph::validate() const {
  if (n <= 0) throw InputError("network must have at least one vertex");
  if (masses.size() != n) throw InputError("mass vector size does not match vertex count");
  for (int i = 0; i < n; ++i) {
    if (!(masses[i] > 0.0) || !std::isfinite(masses[i]))
      throw InputError("vertex masses must be strictly positive and finite");
  }
  for (const Edge& e : edges) {
    if (e.tail < 0 || e.tail >= n || e.head < 0 || e.head >= n)
      throw InputError("edge endpoint out of range");
    if (e.tail == e.head) throw InputError("self-loops are not allowed");
    if (e.weight < 0.0 || !std::isfinite(e.weight))
      throw InputError("edge weights must be nonnegative and finite");
  }
  for (int v : forced) {
    if (v < 0 || v >= n) throw InputError("forced vertex out of range");
  }
}

std::vector<int> edge_indices(const NetworkGraph& g, KindFilter kind) {
  std::vector<int> idx;
  idx.reserve(g.edges.size());
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    if (matches(g.edges[e].kind, kind)) idx.push_back(e);
  }
  return idx;
}

Matrix incidence_matrix(const NetworkGraph& g, KindFilter kind) {
  const std::vector<int> idx = edge_indices(g, kind);
  Matrix d = Matrix::Zero(g.n, static_cast<int>(idx.size()));
  for (int c = 0; c < static_cast<int>(idx.size()); ++c) {
    const Edge& e = g.edges[idx[c]];
    d(e.tail, c) = -1.0;
    d(e.head, c) = 1.0;
  }
  return d;
}

Vector edge_weights(const NetworkGraph& g, KindFilter kind) {
  const std::vector<int> idx = edge_indices(g, kind);
  Vector w(static_cast<int>(idx.size()));
  for (int c = 0; c < static_cast<int>(idx.size()); ++c) w[c] = g.edges[idx[c]].weight;
  return w;
}

Matrix weighted_laplacian(const NetworkGraph& g, KindFilter kind) {
  // Assembled edge by edge; sign-symmetric in the orientation, so flipping
  // edges reproduces the exact same floating-point entries.
  Matrix l = Matrix::Zero(g.n, g.n);
  for (const Edge& e : g.edges) {
    if (!matches(e.kind, kind)) continue;
    l(e.tail, e.tail) += e.weight;
    l(e.head, e.head) += e.weight;
    l(e.tail, e.head) -= e.weight;
    l(e.head, e.tail) -= e.weight;
  }
  return l;
}

Matrix effective_laplacian(const NetworkGraph& g, KindFilter kind) {
  return g.masses.cwiseInverse().asDiagonal() * weighted_laplacian(g, kind);
}

Matrix input_matrix(const NetworkGraph& g) {
  Matrix e = Matrix::Zero(g.n, g.num_inputs());
  for (int j = 0; j < g.num_inputs(); ++j) e(g.forced[j], j) = 1.0;
  return e;
}

namespace {

int find_root(std::vector<int>& parent, int v) {
  while (parent[v] != v) {
    parent[v] = parent[parent[v]];
    v = parent[v];
  }
  return v;
}

}  // namespace

bool is_connected(const NetworkGraph& g, KindFilter kind) {
  if (g.n <= 1) return true;
  std::vector<int> parent(g.n);
  std::iota(parent.begin(), parent.end(), 0);
  int components = g.n;
  for (const Edge& e : g.edges) {
    if (!matches(e.kind, kind) || e.weight <= 0.0) continue;
    const int a = find_root(parent, e.tail);
    const int b = find_root(parent, e.head);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

}  // namespace netclust

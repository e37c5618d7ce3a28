// Copyright netclust contributors.
// SPDX-License-Identifier: Apache-2.0

#include "netclust/reduction.hpp"

#include <Eigen/QR>

#include <cmath>

namespace netclust {

FirstOrderModel assemble_first_order(const NetworkGraph& g, Coords coords) {
  g.validate();
  const Matrix d = incidence_matrix(g, KindFilter::Damper);
  const Vector r = edge_weights(g, KindFilter::Damper);
  const Matrix l = weighted_laplacian(g, KindFilter::Damper);
  const Matrix e = input_matrix(g);
  const Vector inv_m = g.masses.cwiseInverse();
  const Matrix r_half_dt = r.cwiseSqrt().asDiagonal() * d.transpose();

  FirstOrderModel model;
  model.coords = coords;
  model.graph = g;
  if (coords == Coords::MomentumX) {
    model.A = -l * inv_m.asDiagonal();
    model.B = e;
    model.C = r_half_dt * inv_m.asDiagonal();
  } else {
    model.A = -(inv_m.asDiagonal() * l);
    model.B = inv_m.asDiagonal() * e;
    model.C = r_half_dt;
  }
  return model;
}

ReductionResult reduce_graph(const NetworkGraph& g, const Partition& part) {
  g.validate();
  if (part.num_vertices() != g.n) throw InputError("partition does not match the network");

  ReductionResult rr;
  rr.partition = part;
  rr.vertex_to_cell = part.cell_index();
  const int ncells = part.num_cells();

  rr.reduced.n = ncells;
  rr.reduced.masses = Vector::Zero(ncells);
  for (int c = 0; c < ncells; ++c) {
    for (int v : part.cells[c]) rr.reduced.masses[c] += g.masses[v];
  }

  rr.edge_map.assign(g.edges.size(), std::nullopt);
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    const Edge& edge = g.edges[e];
    const int ct = rr.vertex_to_cell[edge.tail];
    const int ch = rr.vertex_to_cell[edge.head];
    if (ct == ch) continue;  // intra-cell edges drop out of P^T D
    rr.edge_map[e] = static_cast<int>(rr.reduced.edges.size());
    rr.reduced.edges.push_back({ct, ch, edge.weight, edge.kind});
  }

  rr.reduced.forced.reserve(g.forced.size());
  for (int v : g.forced) rr.reduced.forced.push_back(rr.vertex_to_cell[v]);
  rr.reduced.validate();

  auto [v, w] = petrov_galerkin_factors(g, part);
  rr.V = std::move(v);
  rr.W = std::move(w);
  return rr;
}

std::vector<std::optional<int>> channel_map(const NetworkGraph& g,
                                            const ReductionResult& rr, KindFilter kind) {
  // Positions of surviving edges within the reduced graph's filtered list.
  std::vector<int> reduced_pos(rr.reduced.edges.size(), -1);
  int pos = 0;
  for (int e = 0; e < static_cast<int>(rr.reduced.edges.size()); ++e) {
    if (matches(rr.reduced.edges[e].kind, kind)) reduced_pos[e] = pos++;
  }
  std::vector<std::optional<int>> map;
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    if (!matches(g.edges[e].kind, kind)) continue;
    if (rr.edge_map[e])
      map.emplace_back(reduced_pos[*rr.edge_map[e]]);
    else
      map.emplace_back(std::nullopt);
  }
  return map;
}

std::pair<Matrix, Matrix> petrov_galerkin_factors(const NetworkGraph& g,
                                                  const Partition& part) {
  if (part.num_vertices() != g.n) throw InputError("partition does not match the network");
  const int ncells = part.num_cells();
  Matrix w = characteristic_matrix(part, g.n);
  Matrix v = Matrix::Zero(g.n, ncells);
  for (int c = 0; c < ncells; ++c) {
    double cell_mass = 0.0;
    for (int i : part.cells[c]) cell_mass += g.masses[i];
    for (int i : part.cells[c]) v(i, c) = g.masses[i] / cell_mass;
  }
  return {std::move(v), std::move(w)};
}

DecouplingTransform decoupling_transform(const NetworkGraph& g, const Partition& part,
                                         KindFilter kind) {
  g.validate();
  if (part.num_vertices() != g.n) throw InputError("partition does not match the network");
  const int n = g.n;
  const int ncells = part.num_cells();

  const Matrix p = characteristic_matrix(part, n);
  const Matrix mp = g.masses.asDiagonal() * p;

  // Orthonormal basis of (M im P)^perp: trailing columns of a full QR of MP.
  Eigen::HouseholderQR<Matrix> qr(mp);
  const Matrix q_full = qr.householderQ() * Matrix::Identity(n, n);
  DecouplingTransform dt;
  dt.S = q_full.rightCols(n - ncells);

  const Matrix a = -weighted_laplacian(g, kind) * g.masses.cwiseInverse().asDiagonal();

  // Inverse of [P^T; S^T] is [M P (P^T M P)^{-1}, M S (S^T M S)^{-1}].
  Matrix t(n, n);
  t.topRows(ncells) = p.transpose();
  t.bottomRows(n - ncells) = dt.S.transpose();
  Matrix t_inv(n, n);
  const Matrix ms = g.masses.asDiagonal() * dt.S;
  t_inv.leftCols(ncells) = mp * (p.transpose() * mp).inverse();
  if (n > ncells)
    t_inv.rightCols(n - ncells) = ms * (dt.S.transpose() * ms).inverse();

  dt.transformed = t * a * t_inv;
  dt.top = dt.transformed.topLeftCorner(ncells, ncells);
  dt.bottom = dt.transformed.bottomRightCorner(n - ncells, n - ncells);
  const double off = std::hypot(dt.transformed.topRightCorner(ncells, n - ncells).norm(),
                                dt.transformed.bottomLeftCorner(n - ncells, ncells).norm());
  dt.coupling_residual = off / std::max(1.0, dt.transformed.norm());
  return dt;
}

}  // namespace netclust

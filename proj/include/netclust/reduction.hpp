// Copyright netclust contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "netclust/netgraph.hpp"
#include "netclust/partition.hpp"
#include "netclust/types.hpp"

namespace netclust {

enum class Coords { MomentumX, VelocityV };

/// State-space realization of the first-order network dynamics over the
/// damper edges, with the dissipated-power output y = R^{1/2} D^T v.
struct FirstOrderModel {
  Matrix A;
  Matrix B;
  Matrix C;
  Coords coords = Coords::MomentumX;
  NetworkGraph graph;  // source network
};

/// Momentum form: A = -L M^{-1}, B = E, C = R^{1/2} D^T M^{-1}.
/// Velocity form: A = -M^{-1} L, B = M^{-1} E, C = R^{1/2} D^T.
/// The two share the same transfer matrix.
FirstOrderModel assemble_first_order(const NetworkGraph& g,
                                     Coords coords = Coords::MomentumX);

/// Graph quotient by a partition: cells become vertices with summed masses,
/// inter-cell edges survive (parallel edges stay distinct), intra-cell edges
/// drop, inputs map to cells column by column.
struct ReductionResult {
  NetworkGraph reduced;
  Partition partition;
  std::vector<int> vertex_to_cell;
  /// Original edge index -> surviving edge index, or nullopt when dropped.
  std::vector<std::optional<int>> edge_map;
  Matrix V;  // M P (P^T M P)^{-1}
  Matrix W;  // P
};

ReductionResult reduce_graph(const NetworkGraph& g, const Partition& part);

/// For a kind filter, maps each filtered edge position of g to the position
/// of its surviving edge among the reduced graph's filtered edges (output
/// channel alignment for trajectory and H2 error comparisons).
std::vector<std::optional<int>> channel_map(const NetworkGraph& g,
                                            const ReductionResult& rr,
                                            KindFilter kind);

/// Petrov-Galerkin factors of the clustering projection: W = P and
/// V = M P (P^T M P)^{-1}, so W^T V = I and V^T M^{-1} V = (P^T M P)^{-1}.
std::pair<Matrix, Matrix> petrov_galerkin_factors(const NetworkGraph& g,
                                                  const Partition& part);

/// State transformation z = [P^T; S^T] x applied to the momentum-form state
/// matrix, with im S orthogonal to M im P. Under an almost equitable
/// partition both off-diagonal blocks vanish and the top block is the
/// reduced state matrix; the bottom block is the error dynamics.
struct DecouplingTransform {
  Matrix S;            // n x (n - n_cells), orthonormal columns, S^T M P = 0
  Matrix transformed;  // [P^T; S^T] A [V_P, V_S]
  Matrix top;          // leading n_cells block
  Matrix bottom;       // trailing block (error dynamics)
  double coupling_residual = 0.0;  // off-diagonal mass, relative
};

DecouplingTransform decoupling_transform(const NetworkGraph& g, const Partition& part,
                                         KindFilter kind = KindFilter::Damper);

}  // namespace netclust

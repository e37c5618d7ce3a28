// Copyright netclust contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>

#include "netclust/h2analysis.hpp"
#include "netclust/netgraph.hpp"
#include "netclust/partition.hpp"
#include "netclust/types.hpp"

namespace netclust {

/// Mass-spring-damper network in port-Hamiltonian form over the state
/// (q, p): spring elongations q on the spring edges, vertex momenta p.
///
///   d/dt [q; p] = [[0, Ds^T]; [-Ds, -Dd R Dd^T]] [K q; M^{-1} p] + [0; E] u
///
/// with damper outputs y = R^{1/2} Dd^T M^{-1} p.
struct SecondOrderModel {
  NetworkGraph graph;
  Matrix spring_incidence;  // Ds, n x k_s
  Matrix damper_incidence;  // Dd, n x k_d
  Vector spring_constants;  // diagonal of K
  Vector damper_constants;  // diagonal of R
  Matrix A;                 // (k_s + n) x (k_s + n)
  Matrix B;
  Matrix C;

  int num_springs() const { return static_cast<int>(spring_incidence.cols()); }
  int num_dampers() const { return static_cast<int>(damper_incidence.cols()); }
  int num_vertices() const { return graph.n; }
  int state_dim() const { return num_springs() + graph.n; }
};

SecondOrderModel assemble_second_order(const NetworkGraph& g);

/// Total energy H(q, p) = p^T M^{-1} p / 2 + q^T K q / 2 of a stacked state
/// (q, p).
double hamiltonian(const SecondOrderModel& model, const Vector& state);

/// Almost equitability with respect to both effective Laplacians: the
/// damper-side and spring-side subspace witnesses. The joint condition is
/// the AND of the two verdicts.
std::pair<AepWitness, AepWitness> check_joint_aep(const NetworkGraph& g,
                                                  const Partition& part,
                                                  double tol = kDefaultTol);

/// Clustered mass-spring-damper model on the quotient graph: surviving
/// spring/damper edges, cell masses, mapped inputs. Preserves the skew
/// interconnection and negative-semidefinite dissipation structure.
SecondOrderModel reduce_second_order(const NetworkGraph& g, const Partition& part);

struct SecondOrderErrorResult {
  double xi_oracle = 0.0;
  double xi_formula = 0.0;
  bool joint_aep = false;
  bool damper_aep = false;
  bool spring_aep = false;
  int deflated_modes = 0;  // rigid-body, spring-cycle, undamped oscillations
};

struct SecondOrderH2Options {
  double tol = kDefaultTol;
  double quad_abs_tol = 1e-10;
  /// Quadrature is the default oracle; the complex eigen-sum is available
  /// for cross-checks.
  bool use_quadrature = true;
};

/// Numerical ||G - G_hat||_2^2 of the second-order reduction with damper
/// outputs, next to the first-order error formula value. The two match under
/// a joint AEP.
SecondOrderErrorResult h2_error_second_order(const NetworkGraph& g,
                                             const Partition& part,
                                             const SecondOrderH2Options& opts = {});

}  // namespace netclust

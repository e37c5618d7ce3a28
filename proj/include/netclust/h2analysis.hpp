// Copyright netclust contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "netclust/netgraph.hpp"
#include "netclust/partition.hpp"
#include "netclust/reduction.hpp"
#include "netclust/types.hpp"

namespace netclust {

/// Eigenstructure of the effective Laplacian M^{-1} L, computed through the
/// symmetric similarity M^{-1/2} L M^{-1/2}. Right and left eigenvectors are
/// biorthonormal (left.col(i)^T * right.col(j) = delta_ij); for a connected
/// filtered graph the zero mode is normalized to right = ones and
/// left = M*ones / total_mass.
struct EffectiveEigen {
  Vector eigenvalues;  // real, ascending
  Matrix right;
  Matrix left;
};

EffectiveEigen effective_eigendecomposition(const NetworkGraph& g,
                                            KindFilter kind = KindFilter::Damper);

/// Controllability-type Gramian of the damper network in closed form,
/// X = (M - M 1 1^T M / total_mass) / 2. Requires a connected damper
/// subgraph (the derivation needs a single zero Laplacian eigenvalue).
Matrix gramian_closed_form(const NetworkGraph& g);

/// ||G||_2^2 = sum over input columns of (1/m_i - 1/sigma_M) / 2. Requires a
/// connected damper subgraph and at least one input.
double h2_full_closed_form(const NetworkGraph& g);

/// ||G_hat||_2^2 = sum over input columns of (1/sigma_M^i - 1/sigma_M) / 2,
/// where sigma_M^i is the mass of the cell containing the forced vertex.
double h2_reduced_closed_form(const NetworkGraph& g, const Partition& part);

/// Xi = sum over input columns of (1/m_i - 1/sigma_M^i) / 2. Equals the
/// squared H2 reduction error when the partition is almost equitable; it is
/// computed for any partition and flagged accordingly in reports.
double reduction_error_formula(const NetworkGraph& g, const Partition& part);

struct H2OracleOptions {
  /// Pair eigenvalue sums with real part at or below marginal_scale * ||A||_F
  /// are marginal: their modes must be unobservable or uncontrollable.
  double marginal_scale = 1e-10;
  /// Relative observability*controllability product below which a marginal
  /// mode is deflated; above it the H2 norm is undefined (hard error).
  double obs_product_tol = 1e-9;
  /// Absolute target for the quadrature fallback.
  double quad_abs_tol = 1e-10;
  bool allow_quadrature_fallback = true;
  /// Optional tail bound for the quadrature: given the propagated impulse
  /// block e^{At} B_deflated, returns an upper bound on the remaining
  /// integral. Defaults to a decay-rate estimate.
  std::function<double(const Matrix&)> tail_bound;
};

/// Independent numerical H2 norm (squared) of (A, B, C): eigenvalue-sum over
/// biorthonormal eigenpairs with marginal-mode deflation, falling back to
/// step-halving quadrature of ||C e^{At} B||_F^2 when A resists
/// diagonalization. Never consults the closed forms above.
double h2_oracle(const Matrix& A, const Matrix& B, const Matrix& C,
                 const H2OracleOptions& opts = {});
double h2_oracle(const FirstOrderModel& model, const H2OracleOptions& opts = {});

/// Quadrature route on its own: integral of ||C e^{At} B||_F^2 after
/// marginal-mode deflation, with Richardson step control.
double h2_quadrature(const Matrix& A, const Matrix& B, const Matrix& C,
                     const H2OracleOptions& opts = {});

/// ||G - G_hat||_2^2 from the stacked error system: block-diagonal full and
/// reduced dynamics, shared input, output aligned per damper edge with
/// dropped channels compared against zero.
double h2_error_oracle(const NetworkGraph& g, const Partition& part,
                       const H2OracleOptions& opts = {});

struct ForcedVertexTerm {
  int vertex = 0;  // 0-based
  double mass = 0.0;
  std::optional<double> cell_mass;  // sigma_M^i when a partition is present
};

struct H2Report {
  double h2_full_closed = 0.0;
  std::optional<double> h2_full_oracle;
  std::optional<double> h2_reduced_closed;
  std::optional<double> h2_reduced_oracle;
  std::optional<double> xi_formula;
  std::optional<double> xi_oracle;
  /// |  ||G||^2 - ||G-G_hat||^2 - ||G_hat||^2 | over the oracle values.
  std::optional<double> pythagoras_residual;
  std::vector<ForcedVertexTerm> forced_terms;
  bool aep_definition = false;
  bool aep_subspace = false;
  /// The closed-form error identity is only guaranteed under an AEP.
  bool xi_is_error_guarantee = false;
};

H2Report build_report(const NetworkGraph& g, const std::optional<Partition>& part,
                      bool run_oracles, double tol = kDefaultTol);

}  // namespace netclust

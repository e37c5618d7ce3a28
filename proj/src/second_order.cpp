// Copyright netclust contributors.
// SPDX-License-Identifier: Apache-2.0

#include "netclust/second_order.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <optional>
#include <vector>

namespace netclust {

SecondOrderModel assemble_second_order(const NetworkGraph& g) {
  g.validate();
  SecondOrderModel model;
  model.graph = g;
  model.spring_incidence = incidence_matrix(g, KindFilter::Spring);
  model.damper_incidence = incidence_matrix(g, KindFilter::Damper);
  model.spring_constants = edge_weights(g, KindFilter::Spring);
  model.damper_constants = edge_weights(g, KindFilter::Damper);

  const int n = g.n;
  const int ks = model.num_springs();
  const int kd = model.num_dampers();
  const Vector inv_m = g.masses.cwiseInverse();
  const Matrix e = input_matrix(g);

  Matrix a = Matrix::Zero(ks + n, ks + n);
  a.topRightCorner(ks, n) = model.spring_incidence.transpose() * inv_m.asDiagonal();
  a.bottomLeftCorner(n, ks) =
      -(model.spring_incidence * model.spring_constants.asDiagonal());
  a.bottomRightCorner(n, n) =
      -(model.damper_incidence * model.damper_constants.asDiagonal() *
        model.damper_incidence.transpose() * inv_m.asDiagonal());
  model.A = std::move(a);

  model.B = Matrix::Zero(ks + n, g.num_inputs());
  model.B.bottomRows(n) = e;

  model.C = Matrix::Zero(kd, ks + n);
  model.C.rightCols(n) = model.damper_constants.cwiseSqrt().asDiagonal() *
                         model.damper_incidence.transpose() * inv_m.asDiagonal();
  return model;
}

double hamiltonian(const SecondOrderModel& model, const Vector& state) {
  const int ks = model.num_springs();
  const int n = model.num_vertices();
  if (state.size() != ks + n) throw InputError("state size does not match the model");
  const auto q = state.head(ks);
  const auto p = state.tail(n);
  return 0.5 * p.dot(model.graph.masses.cwiseInverse().cwiseProduct(p)) +
         0.5 * q.dot(model.spring_constants.cwiseProduct(q));
}

std::pair<AepWitness, AepWitness> check_joint_aep(const NetworkGraph& g,
                                                  const Partition& part, double tol) {
  return {check_aep_subspace(g, part, KindFilter::Damper, tol),
          check_aep_subspace(g, part, KindFilter::Spring, tol)};
}

SecondOrderModel reduce_second_order(const NetworkGraph& g, const Partition& part) {
  return assemble_second_order(reduce_graph(g, part).reduced);
}

SecondOrderErrorResult h2_error_second_order(const NetworkGraph& g, const Partition& part,
                                             const SecondOrderH2Options& opts) {
  const SecondOrderModel full = assemble_second_order(g);
  const ReductionResult rr = reduce_graph(g, part);
  const SecondOrderModel reduced = assemble_second_order(rr.reduced);
  const std::vector<std::optional<int>> channels =
      channel_map(g, rr, KindFilter::Damper);

  const int df = full.state_dim();
  const int dr = reduced.state_dim();
  const int m = static_cast<int>(full.B.cols());
  const int k = full.num_dampers();

  Matrix a = Matrix::Zero(df + dr, df + dr);
  a.topLeftCorner(df, df) = full.A;
  a.bottomRightCorner(dr, dr) = reduced.A;
  Matrix b(df + dr, m);
  b.topRows(df) = full.B;
  b.bottomRows(dr) = reduced.B;
  Matrix c = Matrix::Zero(k, df + dr);
  c.leftCols(df) = full.C;
  for (int r = 0; r < k; ++r) {
    if (channels[r]) c.row(r).tail(dr) = -reduced.C.row(*channels[r]);
  }

  SecondOrderErrorResult result;
  result.xi_formula = reduction_error_formula(g, part);
  auto [damper_witness, spring_witness] = check_joint_aep(g, part, opts.tol);
  result.damper_aep = damper_witness.verdict;
  result.spring_aep = spring_witness.verdict;
  result.joint_aep = result.damper_aep && result.spring_aep;

  H2OracleOptions oracle_opts;
  oracle_opts.quad_abs_tol = opts.quad_abs_tol;

  // Exact tail bound for the stacked port-Hamiltonian pair: each block's
  // remaining dissipation integral is bounded by its Hamiltonian, and
  // ||y - y_hat||^2 <= 2||y||^2 + 2||y_hat||^2.
  oracle_opts.tail_bound = [&full, &reduced, df](const Matrix& x) {
    double bound = 0.0;
    for (int col = 0; col < x.cols(); ++col) {
      const Vector zf = x.col(col).head(df);
      const Vector zr = x.col(col).tail(x.rows() - df);
      bound += 2.0 * hamiltonian(full, zf) + 2.0 * hamiltonian(reduced, zr);
    }
    return bound;
  };

  result.xi_oracle = opts.use_quadrature ? h2_quadrature(a, b, c, oracle_opts)
                                         : h2_oracle(a, b, c, oracle_opts);

  // Marginal modes handled above: rigid-body momentum per block, spring
  // cycles in ker(Ds K), undamped unobservable oscillations.
  Eigen::EigenSolver<Matrix> solver(a, false);
  const double tol_marginal = 1e-10 * a.norm();
  for (int i = 0; i < a.rows(); ++i) {
    if (-solver.eigenvalues()[i].real() <= tol_marginal) ++result.deflated_modes;
  }
  return result;
}

}  // namespace netclust

// Copyright netclust contributors.
// SPDX-License-Identifier: Apache-2.0

#include "netclust/h2analysis.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

namespace netclust {

namespace {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

void require_damper_connected(const NetworkGraph& g, const char* what) {
  if (!is_connected(g, KindFilter::Damper))
    throw NumericalError(std::string(what) +
                         " requires a connected damper subgraph (single zero eigenvalue)");
}

double cell_mass_of_vertex(const NetworkGraph& g, const std::vector<int>& cell_of,
                           const Partition& part, int v) {
  double total = 0.0;
  for (int i : part.cells[cell_of[v]]) total += g.masses[i];
  return total;
}

}  // namespace

EffectiveEigen effective_eigendecomposition(const NetworkGraph& g, KindFilter kind) {
  g.validate();
  const Vector sqrt_m = g.masses.cwiseSqrt();
  const Vector inv_sqrt_m = sqrt_m.cwiseInverse();
  Matrix sym = inv_sqrt_m.asDiagonal() * weighted_laplacian(g, kind) *
               inv_sqrt_m.asDiagonal();
  sym = 0.5 * (sym + sym.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success)
    throw NumericalError("symmetric eigendecomposition failed");

  EffectiveEigen eig;
  eig.eigenvalues = solver.eigenvalues();
  eig.right = inv_sqrt_m.asDiagonal() * solver.eigenvectors();
  eig.left = sqrt_m.asDiagonal() * solver.eigenvectors();
  if (is_connected(g, kind)) {
    // Zero mode pinned to the consensus pair: right = ones, left = M*1/sigma.
    eig.eigenvalues[0] = 0.0;
    eig.right.col(0) = Vector::Ones(g.n);
    eig.left.col(0) = g.masses / g.total_mass();
  }
  return eig;
}

Matrix gramian_closed_form(const NetworkGraph& g) {
  g.validate();
  require_damper_connected(g, "the closed-form Gramian");
  const Vector m = g.masses;
  return 0.5 * (Matrix(m.asDiagonal()) - m * m.transpose() / g.total_mass());
}

double h2_full_closed_form(const NetworkGraph& g) {
  g.validate();
  if (g.forced.empty()) throw InputError("H2 norm needs at least one input");
  require_damper_connected(g, "the closed-form H2 norm");
  const double sigma = g.total_mass();
  double sum = 0.0;
  for (int v : g.forced) sum += 1.0 / g.masses[v] - 1.0 / sigma;
  return 0.5 * sum;
}

double h2_reduced_closed_form(const NetworkGraph& g, const Partition& part) {
  g.validate();
  if (part.num_vertices() != g.n) throw InputError("partition does not match the network");
  if (g.forced.empty()) throw InputError("H2 norm needs at least one input");
  require_damper_connected(g, "the closed-form reduced H2 norm");
  const double sigma = g.total_mass();
  const std::vector<int> cell_of = part.cell_index();
  double sum = 0.0;
  for (int v : g.forced)
    sum += 1.0 / cell_mass_of_vertex(g, cell_of, part, v) - 1.0 / sigma;
  return 0.5 * sum;
}

double reduction_error_formula(const NetworkGraph& g, const Partition& part) {
  g.validate();
  if (part.num_vertices() != g.n) throw InputError("partition does not match the network");
  const std::vector<int> cell_of = part.cell_index();
  double sum = 0.0;
  for (int v : g.forced)
    sum += 1.0 / g.masses[v] - 1.0 / cell_mass_of_vertex(g, cell_of, part, v);
  return 0.5 * sum;
}

namespace {

struct EigenData {
  ComplexVector eigenvalues;       // of A
  ComplexMatrix right;             // V
  ComplexMatrix left;              // V^{-1}, rows biorthonormal to V columns
  Vector obs_products;             // relative per-mode observability*controllability
  double marginal_tol = 0.0;       // on Re(-lambda)
  bool reliable = false;
};

EigenData analyze_modes(const Matrix& a, const Matrix& b, const Matrix& c,
                        const H2OracleOptions& opts) {
  EigenData data;
  const int d = static_cast<int>(a.rows());
  Eigen::EigenSolver<Matrix> solver(a, true);
  if (solver.info() != Eigen::Success) return data;
  data.eigenvalues = solver.eigenvalues();
  data.right = solver.eigenvectors();

  Eigen::PartialPivLU<ComplexMatrix> lu(data.right);
  data.left = lu.solve(ComplexMatrix::Identity(d, d));
  const double norm_a = a.norm();
  data.marginal_tol = opts.marginal_scale * norm_a;

  const double diag_residual =
      (a.cast<std::complex<double>>() * data.right -
       data.right * data.eigenvalues.asDiagonal())
          .norm() /
      (1.0 + norm_a);
  const double cond = data.right.norm() * data.left.norm() / std::max(1, d);
  data.reliable = diag_residual < 1e-8 && cond < 1e8 &&
                  (data.right * data.left - ComplexMatrix::Identity(d, d)).norm() < 1e-6;

  const double norm_b = b.norm();
  const double norm_c = c.norm();
  data.obs_products.resize(d);
  for (int i = 0; i < d; ++i) {
    const double cv = (c * data.right.col(i)).norm();
    const double bw = (data.left.row(i) * b).norm();
    const double obs = cv / (norm_c * data.right.col(i).norm() + 1e-300);
    const double ctr = bw / (norm_b * data.left.row(i).norm() + 1e-300);
    data.obs_products[i] = obs * ctr;
  }
  return data;
}

// Core eigenvalue-sum: sum over mode pairs of
//   (C v_i . C v_j) (w_i^T B . w_j^T B) / (nu_i + nu_j),  nu = -lambda(A),
// skipping marginal pairs after verifying they are deflatable.
double eigen_sum(const EigenData& data, const Matrix& b, const Matrix& c,
                 const H2OracleOptions& opts, bool* ok) {
  const int d = static_cast<int>(data.eigenvalues.size());
  const ComplexMatrix f = c.cast<std::complex<double>>() * data.right;   // k x d
  const ComplexMatrix gmat = data.left * b.cast<std::complex<double>>();  // d x m
  const ComplexMatrix phi = f.transpose() * f;
  const ComplexMatrix psi = gmat * gmat.transpose();

  std::complex<double> acc(0.0, 0.0);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const std::complex<double> s = -(data.eigenvalues[i] + data.eigenvalues[j]);
      if (s.real() <= data.marginal_tol) {
        if (std::min(data.obs_products[i], data.obs_products[j]) > opts.obs_product_tol)
          throw NumericalError(
              "H2 norm undefined: observable and controllable marginal mode");
        continue;
      }
      acc += phi(j, i) * psi(i, j) / s;
    }
  }
  if (std::abs(acc.imag()) > 1e-8 * (1.0 + std::abs(acc.real()))) {
    *ok = false;
    return 0.0;
  }
  *ok = true;
  return acc.real();
}

// Removes the deflatable marginal modes from the input directions so the
// propagated impulse response decays. Throws when a marginal mode is both
// observable and controllable.
Matrix deflate_inputs(const EigenData& data, const Matrix& b,
                      const H2OracleOptions& opts, int* deflated,
                      double* slowest_decay) {
  const int d = static_cast<int>(data.eigenvalues.size());
  ComplexMatrix bc = b.cast<std::complex<double>>();
  int count = 0;
  double nu_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < d; ++i) {
    const double re_nu = -data.eigenvalues[i].real();
    if (re_nu <= data.marginal_tol) {
      if (data.obs_products[i] > opts.obs_product_tol)
        throw NumericalError(
            "H2 norm undefined: observable and controllable marginal mode");
      bc -= data.right.col(i) * (data.left.row(i) * b.cast<std::complex<double>>());
      ++count;
    } else {
      nu_min = std::min(nu_min, re_nu);
    }
  }
  if (deflated) *deflated = count;
  if (slowest_decay) *slowest_decay = nu_min;
  return bc.real();
}

double simpson_level(const Matrix& a, const Matrix& b0, const Matrix& c, double horizon,
                     long intervals) {
  const double h = horizon / static_cast<double>(intervals);
  const Matrix propagator = (a * h).exp();
  Matrix x = b0;
  double odd = 0.0;
  double even = 0.0;
  const double g0 = (c * x).squaredNorm();
  double g_last = 0.0;
  for (long k = 1; k <= intervals; ++k) {
    x = (propagator * x).eval();
    const double gk = (c * x).squaredNorm();
    if (k == intervals)
      g_last = gk;
    else if (k % 2 == 1)
      odd += gk;
    else
      even += gk;
  }
  return h / 3.0 * (g0 + 4.0 * odd + 2.0 * even + g_last);
}

}  // namespace

double h2_quadrature(const Matrix& a, const Matrix& b, const Matrix& c,
                     const H2OracleOptions& opts) {
  const int d = static_cast<int>(a.rows());
  if (d == 0 || b.cols() == 0 || c.rows() == 0) return 0.0;
  if (b.norm() == 0.0 || c.norm() == 0.0) return 0.0;

  const EigenData data = analyze_modes(a, b, c, opts);
  if (data.eigenvalues.size() == 0)
    throw NumericalError("quadrature oracle: eigenvalue analysis failed");
  int deflated = 0;
  double nu_min = 0.0;
  const Matrix b0 = deflate_inputs(data, b, opts, &deflated, &nu_min);
  if (b0.norm() == 0.0) return 0.0;
  if (!std::isfinite(nu_min) || nu_min <= 0.0)
    throw NumericalError("quadrature oracle: no decaying dynamics left");

  // Grid scale from the spectral radius, horizon scan from the tail bound.
  double rho = 0.0;
  for (int i = 0; i < d; ++i) rho = std::max(rho, std::abs(data.eigenvalues[i]));
  const double h0 = 0.2 / std::max(rho, 1e-8);

  const Matrix scan_prop = (a * h0).exp();
  Matrix x = b0;
  double peak = (c * x).squaredNorm();
  double coarse_integral = 0.0;
  double g_prev = peak;
  long steps = 0;
  const long max_steps = 4'000'000;
  for (;;) {
    x = (scan_prop * x).eval();
    ++steps;
    const double g_now = (c * x).squaredNorm();
    coarse_integral += 0.5 * h0 * (g_prev + g_now);
    g_prev = g_now;
    peak = std::max(peak, g_now);
    if (g_now <= 1e-12 * peak) {
      const double tail = opts.tail_bound ? opts.tail_bound(x)
                                          : 10.0 * g_now / (2.0 * nu_min);
      if (tail <= 0.25 * std::max(opts.quad_abs_tol,
                                  1e-10 * (1.0 + coarse_integral)))
        break;
    }
    if (steps >= max_steps)
      throw NumericalError("quadrature oracle: horizon scan did not converge");
  }

  const double horizon = static_cast<double>(steps) * h0;
  long intervals = steps + (steps % 2);  // Simpson needs an even count
  const double tol = std::max(opts.quad_abs_tol, 1e-12 * (1.0 + coarse_integral));
  double previous = simpson_level(a, b0, c, horizon, intervals);
  for (int level = 0; level < 9; ++level) {
    intervals *= 2;
    const double current = simpson_level(a, b0, c, horizon, intervals);
    const double diff = std::abs(current - previous);
    if (diff <= 15.0 * tol) return current + (current - previous) / 15.0;
    previous = current;
  }
  throw NumericalError("quadrature oracle: step halving did not converge");
}

double h2_oracle(const Matrix& a, const Matrix& b, const Matrix& c,
                 const H2OracleOptions& opts) {
  const int d = static_cast<int>(a.rows());
  if (d == 0 || b.cols() == 0 || c.rows() == 0) return 0.0;
  if (b.norm() == 0.0 || c.norm() == 0.0) return 0.0;

  const EigenData data = analyze_modes(a, b, c, opts);
  if (data.reliable) {
    bool ok = false;
    const double value = eigen_sum(data, b, c, opts, &ok);
    if (ok) return value;
  }
  if (!opts.allow_quadrature_fallback)
    throw NumericalError("H2 eigen-sum oracle failed and fallback is disabled");
  return h2_quadrature(a, b, c, opts);
}

double h2_oracle(const FirstOrderModel& model, const H2OracleOptions& opts) {
  return h2_oracle(model.A, model.B, model.C, opts);
}

double h2_error_oracle(const NetworkGraph& g, const Partition& part,
                       const H2OracleOptions& opts) {
  const FirstOrderModel full = assemble_first_order(g, Coords::MomentumX);
  const ReductionResult rr = reduce_graph(g, part);
  const FirstOrderModel reduced = assemble_first_order(rr.reduced, Coords::MomentumX);
  const std::vector<std::optional<int>> channels = channel_map(g, rr, KindFilter::Damper);

  const int nf = static_cast<int>(full.A.rows());
  const int nr = static_cast<int>(reduced.A.rows());
  const int m = static_cast<int>(full.B.cols());
  const int k = static_cast<int>(full.C.rows());

  Matrix a = Matrix::Zero(nf + nr, nf + nr);
  a.topLeftCorner(nf, nf) = full.A;
  a.bottomRightCorner(nr, nr) = reduced.A;
  Matrix b(nf + nr, m);
  b.topRows(nf) = full.B;
  b.bottomRows(nr) = reduced.B;
  Matrix c = Matrix::Zero(k, nf + nr);
  c.leftCols(nf) = full.C;
  for (int r = 0; r < k; ++r) {
    if (channels[r]) c.row(r).tail(nr) = -reduced.C.row(*channels[r]);
  }
  return h2_oracle(a, b, c, opts);
}

H2Report build_report(const NetworkGraph& g, const std::optional<Partition>& part,
                      bool run_oracles, double tol) {
  g.validate();
  H2Report report;
  report.h2_full_closed = h2_full_closed_form(g);

  std::vector<int> cell_of;
  if (part) {
    cell_of = part->cell_index();
    report.h2_reduced_closed = h2_reduced_closed_form(g, *part);
    report.xi_formula = reduction_error_formula(g, *part);
    report.aep_definition =
        check_aep_definition(g, *part, KindFilter::Damper, tol).verdict;
    report.aep_subspace = check_aep_subspace(g, *part, KindFilter::Damper, tol).verdict;
    report.xi_is_error_guarantee = report.aep_definition && report.aep_subspace;
  }

  for (int v : g.forced) {
    ForcedVertexTerm term;
    term.vertex = v;
    term.mass = g.masses[v];
    if (part) term.cell_mass = cell_mass_of_vertex(g, cell_of, *part, v);
    report.forced_terms.push_back(term);
  }

  if (run_oracles) {
    report.h2_full_oracle = h2_oracle(assemble_first_order(g, Coords::MomentumX));
    if (part) {
      const ReductionResult rr = reduce_graph(g, *part);
      report.h2_reduced_oracle =
          h2_oracle(assemble_first_order(rr.reduced, Coords::MomentumX));
      report.xi_oracle = h2_error_oracle(g, *part);
      report.pythagoras_residual = std::abs(*report.h2_full_oracle - *report.xi_oracle -
                                            *report.h2_reduced_oracle);
    }
  }
  return report;
}

}  // namespace netclust

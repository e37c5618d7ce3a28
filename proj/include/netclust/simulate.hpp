// Copyright netclust contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "netclust/reduction.hpp"
#include "netclust/second_order.hpp"
#include "netclust/types.hpp"

namespace netclust {

/// Standard input signals. An impulse on channel j is realized as the
/// initial-condition jump x0 + B e_j, after which the input is zero.
struct InputSignal {
  enum class Kind { Zero, Impulse, Step, Samples };

  Kind kind = Kind::Zero;
  int channel = 0;
  Vector sample_times;  // Samples only; strictly increasing
  Matrix sample_values;  // row per sample time, column per input channel

  static InputSignal zero();
  static InputSignal impulse(int channel);
  static InputSignal step(int channel);
  static InputSignal samples(Vector times, Matrix values);

  /// u(t); linear interpolation for sampled signals (held outside the range).
  Vector eval(double t, int m) const;
  /// True when u(t) vanishes for t > 0 (zero and impulse signals).
  bool vanishes() const { return kind == Kind::Zero || kind == Kind::Impulse; }
  std::string describe() const;
};

/// LTI simulation view of a model: dx/dt = A x + B u, y = C x, with the
/// stored energy E(x) = x^T Q x / 2.
struct LinearModel {
  Matrix A;
  Matrix B;
  Matrix C;
  Matrix energy_quadratic;  // Q
};

LinearModel linear_model(const FirstOrderModel& model);
LinearModel linear_model(const SecondOrderModel& model);

struct Trajectory {
  Vector times;
  Matrix states;   // row per sample
  Matrix outputs;  // row per sample
  Vector energies;
  std::string input_description;
};

/// Classical fixed-step 4th-order integration on the uniform grid
/// t_k = k dt up to t_end. Throws NumericalError if the state leaves the
/// finite range.
Trajectory integrate(const LinearModel& model, const InputSignal& input,
                     Vector x0, double t_end, double dt);

/// Max over interior grid points of |dE/dt + ||y||^2| by centered
/// differences; O(dt^2) for trajectories with vanishing input.
double dissipation_residual(const Trajectory& traj);

struct CompareMetrics {
  double l2_error_sq = 0.0;  // integral of ||y - y_hat||^2 over the grid
  double linf_error = 0.0;
  int channels = 0;
};

/// Output-trajectory comparison with channels aligned through the edge
/// survival map; dropped channels are compared against zero.
CompareMetrics compare(const Trajectory& full, const Trajectory& reduced,
                       const std::vector<std::optional<int>>& channels);

}  // namespace netclust

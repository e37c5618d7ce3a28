// Copyright netclust contributors.
// SPDX-License-Identifier: Apache-2.0

#include "netclust/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace netclust {

InputSignal InputSignal::zero() { return {}; }

InputSignal InputSignal::impulse(int channel) {
  InputSignal s;
  s.kind = Kind::Impulse;
  s.channel = channel;
  return s;
}

InputSignal InputSignal::step(int channel) {
  InputSignal s;
  s.kind = Kind::Step;
  s.channel = channel;
  return s;
}

InputSignal InputSignal::samples(Vector times, Matrix values) {
  if (times.size() != values.rows() || times.size() == 0)
    throw InputError("sampled input needs one row of values per sample time");
  for (int i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1]))
      throw InputError("sample times must be strictly increasing");
  }
  InputSignal s;
  s.kind = Kind::Samples;
  s.sample_times = std::move(times);
  s.sample_values = std::move(values);
  return s;
}

Vector InputSignal::eval(double t, int m) const {
  Vector u = Vector::Zero(m);
  switch (kind) {
    case Kind::Zero:
    case Kind::Impulse:  // realized as an initial-condition jump
      break;
    case Kind::Step:
      if (channel < 0 || channel >= m) throw InputError("step channel out of range");
      if (t >= 0.0) u[channel] = 1.0;
      break;
    case Kind::Samples: {
      if (sample_values.cols() != m) throw InputError("sampled input channel mismatch");
      const int count = static_cast<int>(sample_times.size());
      if (t <= sample_times[0]) {
        u = sample_values.row(0);
      } else if (t >= sample_times[count - 1]) {
        u = sample_values.row(count - 1);
      } else {
        int hi = 1;
        while (sample_times[hi] < t) ++hi;
        const double t0 = sample_times[hi - 1];
        const double t1 = sample_times[hi];
        const double alpha = (t - t0) / (t1 - t0);
        u = (1.0 - alpha) * sample_values.row(hi - 1) + alpha * sample_values.row(hi);
      }
      break;
    }
  }
  return u;
}

std::string InputSignal::describe() const {
  switch (kind) {
    case Kind::Zero:
      return "zero";
    case Kind::Impulse:
      return "impulse:" + std::to_string(channel + 1);
    case Kind::Step:
      return "step:" + std::to_string(channel + 1);
    case Kind::Samples:
      return "samples[" + std::to_string(sample_times.size()) + "]";
  }
  return "unknown";
}

LinearModel linear_model(const FirstOrderModel& model) {
  LinearModel lm;
  lm.A = model.A;
  lm.B = model.B;
  lm.C = model.C;
  // Kinetic energy v^T M v / 2 in the active coordinates.
  if (model.coords == Coords::MomentumX)
    lm.energy_quadratic = Matrix(model.graph.masses.cwiseInverse().asDiagonal());
  else
    lm.energy_quadratic = Matrix(model.graph.masses.asDiagonal());
  return lm;
}

LinearModel linear_model(const SecondOrderModel& model) {
  LinearModel lm;
  lm.A = model.A;
  lm.B = model.B;
  lm.C = model.C;
  const int ks = model.num_springs();
  const int n = model.num_vertices();
  lm.energy_quadratic = Matrix::Zero(ks + n, ks + n);
  lm.energy_quadratic.topLeftCorner(ks, ks) =
      Matrix(model.spring_constants.asDiagonal());
  lm.energy_quadratic.bottomRightCorner(n, n) =
      Matrix(model.graph.masses.cwiseInverse().asDiagonal());
  return lm;
}

Trajectory integrate(const LinearModel& model, const InputSignal& input, Vector x0,
                     double t_end, double dt) {
  if (!(dt > 0.0) || !(t_end > 0.0)) throw InputError("t_end and dt must be positive");
  const int d = static_cast<int>(model.A.rows());
  const int m = static_cast<int>(model.B.cols());
  const int k = static_cast<int>(model.C.rows());
  if (x0.size() == 0) x0 = Vector::Zero(d);
  if (x0.size() != d) throw InputError("initial state size does not match the model");

  if (input.kind == InputSignal::Kind::Impulse) {
    if (input.channel < 0 || input.channel >= m)
      throw InputError("impulse channel out of range");
    x0 += model.B.col(input.channel);
  }

  const long steps = std::lround(t_end / dt);
  if (steps <= 0) throw InputError("time grid is empty");

  Trajectory traj;
  traj.input_description = input.describe();
  traj.times.resize(steps + 1);
  traj.states.resize(steps + 1, d);
  traj.outputs.resize(steps + 1, k);
  traj.energies.resize(steps + 1);

  auto rhs = [&](double t, const Vector& x) -> Vector {
    return model.A * x + model.B * input.eval(t, m);
  };

  Vector x = x0;
  for (long s = 0; s <= steps; ++s) {
    const double t = static_cast<double>(s) * dt;
    traj.times[s] = t;
    traj.states.row(s) = x;
    traj.outputs.row(s) = model.C * x;
    traj.energies[s] = 0.5 * x.dot(model.energy_quadratic * x);
    if (!x.allFinite()) throw NumericalError("integration left the finite range");
    if (s == steps) break;
    const Vector k1 = rhs(t, x);
    const Vector k2 = rhs(t + 0.5 * dt, x + 0.5 * dt * k1);
    const Vector k3 = rhs(t + 0.5 * dt, x + 0.5 * dt * k2);
    const Vector k4 = rhs(t + dt, x + dt * k3);
    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return traj;
}

double dissipation_residual(const Trajectory& traj) {
  const long samples = traj.times.size();
  if (samples < 3) throw InputError("trajectory too short for a centered difference");
  double worst = 0.0;
  for (long s = 1; s + 1 < samples; ++s) {
    const double dt2 = traj.times[s + 1] - traj.times[s - 1];
    const double de = (traj.energies[s + 1] - traj.energies[s - 1]) / dt2;
    const double power = traj.outputs.row(s).squaredNorm();
    worst = std::max(worst, std::abs(de + power));
  }
  return worst;
}

CompareMetrics compare(const Trajectory& full, const Trajectory& reduced,
                       const std::vector<std::optional<int>>& channels) {
  if (full.times.size() != reduced.times.size() ||
      (full.times - reduced.times).cwiseAbs().maxCoeff() > 1e-12)
    throw InputError("trajectories must share the time grid");
  if (static_cast<int>(channels.size()) != full.outputs.cols())
    throw InputError("channel map does not match the full model outputs");

  const long samples = full.times.size();
  CompareMetrics metrics;
  metrics.channels = static_cast<int>(channels.size());
  Vector err_sq(samples);
  for (long s = 0; s < samples; ++s) {
    double acc = 0.0;
    for (size_t ch = 0; ch < channels.size(); ++ch) {
      const double y = full.outputs(s, static_cast<int>(ch));
      const double yr = channels[ch] ? reduced.outputs(s, *channels[ch]) : 0.0;
      const double diff = y - yr;
      acc += diff * diff;
      metrics.linf_error = std::max(metrics.linf_error, std::abs(diff));
    }
    err_sq[s] = acc;
  }
  for (long s = 0; s + 1 < samples; ++s) {
    metrics.l2_error_sq +=
        0.5 * (full.times[s + 1] - full.times[s]) * (err_sq[s] + err_sq[s + 1]);
  }
  return metrics;
}

}  // namespace netclust

#pragma once
// Generators and oracles shared by the unit, property and acceptance tests.

#include "beat/motion.h"
#include "beat/ndiff/tape.h"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <string>

namespace beat::testing {

// Random symmetric positive-definite matrix with eigenvalues in [lo, hi].
inline Eigen::MatrixXd random_spd(ndiff::Rng& rng, int n, double lo = 0.05, double hi = 5.0) {
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) d(i) = rng.uniform(lo, hi);
  Eigen::MatrixXd m = q * d.asDiagonal() * q.transpose();
  return 0.5 * (m + m.transpose());
}

// Denman-Beavers iteration: Y -> sqrt(M), Z -> sqrt(M)^-1. Independent of
// the eigendecomposition used by the library.
inline Eigen::MatrixXd denman_beavers_sqrt(const Eigen::MatrixXd& m, int iterations = 60) {
  Eigen::MatrixXd y = m;
  Eigen::MatrixXd z = Eigen::MatrixXd::Identity(m.rows(), m.cols());
  for (int k = 0; k < iterations; ++k) {
    const Eigen::MatrixXd yi = y.inverse();
    const Eigen::MatrixXd zi = z.inverse();
    y = 0.5 * (y + zi);
    z = 0.5 * (z + yi);
  }
  return y;
}

// Chain skeleton: root with 6 channels, then `joints - 1` children each
// parented to a random earlier joint.
inline Skeleton random_skeleton(ndiff::Rng& rng, std::size_t joints) {
  static const std::vector<std::vector<Channel>> orders = {
      {Channel::Zrotation, Channel::Xrotation, Channel::Yrotation},
      {Channel::Xrotation, Channel::Yrotation, Channel::Zrotation},
      {Channel::Yrotation, Channel::Zrotation, Channel::Xrotation},
  };
  Skeleton s;
  std::vector<std::size_t> path;
  for (std::size_t j = 0; j < joints; ++j) {
    Joint joint;
    joint.name = "J" + std::to_string(j);
    joint.offset = Eigen::Vector3d(rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10));
    const auto& rot = orders[rng.index(orders.size())];
    if (j == 0) {
      joint.offset.setZero();
      joint.channels = {Channel::Xposition, Channel::Yposition, Channel::Zposition};
      joint.channels.insert(joint.channels.end(), rot.begin(), rot.end());
    } else {
      // Any earlier joint on the current root path keeps depth-first order.
      joint.parent = path[rng.index(path.size())];
      joint.channels = rot;
    }
    s.push_back(joint);
    while (!path.empty() && joint.parent && path.back() != *joint.parent) path.pop_back();
    path.push_back(j);
  }
  // Leaves get end sites so the writer has something to emit.
  std::vector<bool> has_child(joints, false);
  for (const auto& j : s)
    if (j.parent) has_child[*j.parent] = true;
  for (std::size_t j = 0; j < joints; ++j)
    if (!has_child[j]) s[j].end_site = Eigen::Vector3d(0, rng.uniform(1, 5), 0);
  return s;
}

inline MotionClip random_clip(ndiff::Rng& rng, const Skeleton& s, std::size_t frames, double fps, double degrees = 90) {
  MotionClip c;
  c.skeleton = s;
  c.fps = fps;
  c.frames = RowMatrix(static_cast<Eigen::Index>(frames), static_cast<Eigen::Index>(channel_count(s)));
  for (Eigen::Index t = 0; t < c.frames.rows(); ++t)
    for (Eigen::Index k = 0; k < c.frames.cols(); ++k)
      c.frames(t, k) = k < 3 ? rng.uniform(-100, 100) : rng.uniform(-degrees, degrees);
  return c;
}

inline PositionTrack random_positions(ndiff::Rng& rng, std::size_t frames, std::size_t joints, double scale = 10) {
  PositionTrack p;
  for (std::size_t j = 0; j < joints; ++j) p.joint_names.push_back("J" + std::to_string(j));
  p.positions = RowMatrix(static_cast<Eigen::Index>(frames), static_cast<Eigen::Index>(3 * joints));
  for (Eigen::Index t = 0; t < p.positions.rows(); ++t)
    for (Eigen::Index k = 0; k < p.positions.cols(); ++k) p.positions(t, k) = rng.uniform(-scale, scale);
  return p;
}

// Central-difference check of d(loss)/d(inputs) for a graph built by `build`
// from leaf variables. Returns the largest relative error over all inputs.
inline double max_fd_error(std::vector<ndiff::Tensor> inputs,
                           const std::function<ndiff::Var(ndiff::Tape&, const std::vector<ndiff::Var>&)>& build,
                           double eps = 1e-6) {
  auto evaluate = [&](const std::vector<ndiff::Tensor>& values, std::vector<ndiff::Tensor>* grads) {
    ndiff::Tape tape;
    std::vector<ndiff::Var> leaves;
    for (const auto& v : values) leaves.push_back(tape.variable(v));
    ndiff::Var loss = build(tape, leaves);
    if (grads) {
      tape.backward(loss);
      for (auto v : leaves) grads->push_back(tape.grad(v));
    }
    return loss.value().item();
  };
  std::vector<ndiff::Tensor> analytic;
  evaluate(inputs, &analytic);
  double worst = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    for (std::size_t k = 0; k < inputs[i].size(); ++k) {
      const double original = inputs[i][k];
      inputs[i][k] = original + eps;
      const double plus = evaluate(inputs, nullptr);
      inputs[i][k] = original - eps;
      const double minus = evaluate(inputs, nullptr);
      inputs[i][k] = original;
      const double numeric = (plus - minus) / (2 * eps);
      const double a = analytic[i][k];
      const double err = std::abs(a - numeric) / std::max(1e-7, std::abs(a) + std::abs(numeric));
      worst = std::max(worst, err);
    }
  }
  return worst;
}

inline ndiff::Tensor random_tensor(ndiff::Rng& rng, ndiff::Shape shape, double lo = -1, double hi = 1) {
  ndiff::Tensor t(std::move(shape));
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(lo, hi);
  return t;
}

}  // namespace beat::testing

#pragma once

// Built-in gesture feature map for FGD when no pretrained encoder features
// are supplied: fixed-length windows of global joint positions, flattened and
// projected onto the leading principal components of the real set.

#include "beat/motion.h"

#include <Eigen/Core>

#include <cstddef>
#include <vector>

namespace beat {

// One row per window of `window` frames taken every `stride` frames.
Eigen::MatrixXd motion_windows(const PositionTrack& track, std::size_t window, std::size_t stride);

class WindowPca {
 public:
  // Fits on real-set windows; keeps min(dims, rows - 1, cols) components.
  WindowPca(const Eigen::MatrixXd& real_windows, std::size_t dims);

  Eigen::MatrixXd project(const Eigen::MatrixXd& windows) const;
  std::size_t dims() const { return static_cast<std::size_t>(basis_.cols()); }

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd basis_;  // cols x dims, orthonormal columns
};

}  // namespace beat

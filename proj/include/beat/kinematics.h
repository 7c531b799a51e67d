#pragma once

#include "beat/motion.h"

#include <Eigen/Geometry>

#include <array>
#include <optional>
#include <string>

namespace beat {

// Euler composition order, outermost axis first: "ZXY" means Rz * Rx * Ry.
struct RotationOrder {
  std::array<int, 3> axes{2, 0, 1};

  static RotationOrder parse(const std::string& text);  // throws std::invalid_argument
  std::string str() const;
};

// Rotation matrix for Euler angles given in degrees, one per axis of `order`.
Eigen::Matrix3d euler_to_matrix(const Eigen::Vector3d& degrees, const RotationOrder& order);

// Global joint positions. Each joint's rotation channels are composed in the
// order its CHANNELS line declares, unless `order` overrides it for every
// joint. The root sits at its translation channels; children at
// parent + R_parent_global * offset.
PositionTrack forward_kinematics(const MotionClip& clip,
                                 const std::optional<RotationOrder>& order = std::nullopt);

// CSV with columns t,joint,x,y,z (one row per frame and joint).
std::string positions_to_csv(const PositionTrack& track);

}  // namespace beat

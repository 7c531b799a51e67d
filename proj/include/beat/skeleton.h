#pragma once

#include "beat/motion.h"

#include <cstddef>
#include <string>
#include <vector>

namespace beat {

// Which joints feed the body and hand pose vectors. The root is in neither:
// its rotation is the global orientation and its translation the trajectory.
struct JointPartition {
  std::vector<std::size_t> body;
  std::vector<std::size_t> hands;
};

// Finger joints (any name containing "Hand" other than the wrists
// RightHand/LeftHand) are hands; every other non-root joint is body.
JointPartition partition_joints(const Skeleton& skeleton);

enum class JointSelection { Body, Hands, All };

JointSelection parse_joint_selection(const std::string& name);
std::vector<std::size_t> select_joints(const Skeleton& skeleton, JointSelection selection);

// Release-layout skeleton: Hips root plus 27 body and 48 hand joints, 231
// channels per frame. Offsets are plausible adult proportions in centimeters.
Skeleton beat_skeleton();

// Rotation channels (degrees) of the given joints, frame by frame: T x 3|joints|.
RowMatrix gather_rotations(const MotionClip& clip, const std::vector<std::size_t>& joints);

// Inverse of gather_rotations; other channels are left untouched.
void scatter_rotations(MotionClip& clip, const std::vector<std::size_t>& joints,
                       const RowMatrix& rotations);

}  // namespace beat

#include "beat/kinematics.h"

#include "beat/bvh.h"
#include "beat/errors.h"

#include <numbers>
#include <sstream>
#include <stdexcept>

namespace beat {

RotationOrder RotationOrder::parse(const std::string& text) {
  if (text.size() != 3) throw std::invalid_argument("unknown rotation order '" + text + "'");
  RotationOrder order;
  bool seen[3] = {false, false, false};
  for (int k = 0; k < 3; ++k) {
    const char c = text[static_cast<std::size_t>(k)];
    const int axis = c == 'X' ? 0 : c == 'Y' ? 1 : c == 'Z' ? 2 : -1;
    if (axis < 0 || seen[axis]) throw std::invalid_argument("unknown rotation order '" + text + "'");
    seen[axis] = true;
    order.axes[static_cast<std::size_t>(k)] = axis;
  }
  return order;
}

std::string RotationOrder::str() const {
  std::string s;
  for (int axis : axes) s += static_cast<char>('X' + axis);
  return s;
}

Eigen::Matrix3d euler_to_matrix(const Eigen::Vector3d& degrees, const RotationOrder& order) {
  constexpr double kDegToRad = std::numbers::pi / 180.0;
  Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
  for (int k = 0; k < 3; ++k) {
    const int axis = order.axes[static_cast<std::size_t>(k)];
    r = r * Eigen::AngleAxisd(degrees[k] * kDegToRad, Eigen::Vector3d::Unit(axis)).toRotationMatrix();
  }
  return r;
}

namespace {

struct JointLayout {
  RotationOrder order;
  std::array<std::size_t, 3> rotation_columns{};
  std::optional<std::array<std::size_t, 3>> position_columns;
};

std::vector<JointLayout> layout(const MotionClip& clip, const std::optional<RotationOrder>& forced) {
  std::vector<JointLayout> result;
  std::size_t column = 0;
  for (const Joint& joint : clip.skeleton) {
    JointLayout l;
    std::array<std::size_t, 3> by_axis{};
    std::string declared;
    int rotations = 0;
    int positions = 0;
    std::array<std::size_t, 3> pos{};
    for (Channel c : joint.channels) {
      switch (c) {
        case Channel::Xposition: pos[0] = column; ++positions; break;
        case Channel::Yposition: pos[1] = column; ++positions; break;
        case Channel::Zposition: pos[2] = column; ++positions; break;
        case Channel::Xrotation: declared += 'X'; by_axis[0] = column; ++rotations; break;
        case Channel::Yrotation: declared += 'Y'; by_axis[1] = column; ++rotations; break;
        case Channel::Zrotation: declared += 'Z'; by_axis[2] = column; ++rotations; break;
      }
      ++column;
    }
    if (rotations != 3) throw DataMismatch("joint '" + joint.name + "' lacks 3 rotation channels");
    if (positions == 3) l.position_columns = pos;
    l.order = forced ? *forced : RotationOrder::parse(declared);
    for (int k = 0; k < 3; ++k) {
      l.rotation_columns[static_cast<std::size_t>(k)] =
          by_axis[static_cast<std::size_t>(l.order.axes[static_cast<std::size_t>(k)])];
    }
    result.push_back(l);
  }
  return result;
}

}  // namespace

PositionTrack forward_kinematics(const MotionClip& clip, const std::optional<RotationOrder>& order) {
  validate_skeleton(clip.skeleton);
  const auto joints = layout(clip, order);
  const std::size_t J = clip.skeleton.size();
  PositionTrack track;
  track.fps = clip.fps;
  for (const Joint& joint : clip.skeleton) track.joint_names.push_back(joint.name);
  track.positions.resize(clip.frames.rows(), static_cast<Eigen::Index>(3 * J));

  std::vector<Eigen::Matrix3d> global_rotation(J);
  std::vector<Eigen::Vector3d> global_position(J);
  for (Eigen::Index t = 0; t < clip.frames.rows(); ++t) {
    const auto row = clip.frames.row(t);
    for (std::size_t j = 0; j < J; ++j) {
      const JointLayout& l = joints[j];
      Eigen::Vector3d angles;
      for (int k = 0; k < 3; ++k) {
        angles[k] = row(static_cast<Eigen::Index>(l.rotation_columns[static_cast<std::size_t>(k)]));
      }
      const Eigen::Matrix3d local = euler_to_matrix(angles, l.order);
      const auto& parent = clip.skeleton[j].parent;
      if (!parent) {
        Eigen::Vector3d translation = Eigen::Vector3d::Zero();
        if (l.position_columns) {
          for (int k = 0; k < 3; ++k) {
            translation[k] =
                row(static_cast<Eigen::Index>((*l.position_columns)[static_cast<std::size_t>(k)]));
          }
        }
        global_position[j] = translation;
        global_rotation[j] = local;
      } else {
        global_position[j] =
            global_position[*parent] + global_rotation[*parent] * clip.skeleton[j].offset;
        global_rotation[j] = global_rotation[*parent] * local;
      }
      track.positions.block<1, 3>(t, static_cast<Eigen::Index>(3 * j)) =
          global_position[j].transpose();
    }
  }
  return track;
}

std::string positions_to_csv(const PositionTrack& track) {
  std::ostringstream out;
  out << "t,joint,x,y,z\n";
  for (std::size_t t = 0; t < track.frame_count(); ++t) {
    const std::string time = format_number(static_cast<double>(t) / track.fps, 6);
    for (std::size_t j = 0; j < track.joint_count(); ++j) {
      const Eigen::Vector3d p = track.at(t, j);
      out << time << ',' << track.joint_names[j] << ',' << format_number(p.x(), 6) << ','
          << format_number(p.y(), 6) << ',' << format_number(p.z(), 6) << '\n';
    }
  }
  return out.str();
}

}  // namespace beat

#include "beat/skeleton.h"

#include "beat/errors.h"

#include <algorithm>

namespace beat {

const char* channel_name(Channel c) {
  switch (c) {
    case Channel::Xposition: return "Xposition";
    case Channel::Yposition: return "Yposition";
    case Channel::Zposition: return "Zposition";
    case Channel::Xrotation: return "Xrotation";
    case Channel::Yrotation: return "Yrotation";
    case Channel::Zrotation: return "Zrotation";
  }
  return "";
}

std::optional<Channel> parse_channel(const std::string& name) {
  static const std::pair<const char*, Channel> table[] = {
      {"Xposition", Channel::Xposition}, {"Yposition", Channel::Yposition},
      {"Zposition", Channel::Zposition}, {"Xrotation", Channel::Xrotation},
      {"Yrotation", Channel::Yrotation}, {"Zrotation", Channel::Zrotation},
  };
  for (const auto& [label, channel] : table) {
    if (name == label) return channel;
  }
  return std::nullopt;
}

void validate_skeleton(const Skeleton& skeleton) {
  if (skeleton.empty()) throw DataMismatch("skeleton has no joints");
  for (std::size_t j = 0; j < skeleton.size(); ++j) {
    const Joint& joint = skeleton[j];
    if (j == 0) {
      if (joint.parent) throw DataMismatch("root joint '" + joint.name + "' has a parent");
      if (joint.channels.size() != 6) {
        throw DataMismatch("root joint '" + joint.name + "' must have 6 channels");
      }
      continue;
    }
    if (!joint.parent || *joint.parent >= j) {
      throw DataMismatch("joint '" + joint.name + "' is not in topological order");
    }
    const bool rotations_only =
        joint.channels.size() == 3 && std::all_of(joint.channels.begin(), joint.channels.end(),
                                                  [](Channel c) { return is_rotation(c); });
    if (!rotations_only) {
      throw DataMismatch("joint '" + joint.name + "' must have exactly 3 rotation channels");
    }
  }
}

std::size_t channel_count(const Skeleton& skeleton) {
  std::size_t n = 0;
  for (const auto& joint : skeleton) n += joint.channels.size();
  return n;
}

std::vector<std::size_t> channel_offsets(const Skeleton& skeleton) {
  std::vector<std::size_t> offsets;
  offsets.reserve(skeleton.size());
  std::size_t column = 0;
  for (const auto& joint : skeleton) {
    offsets.push_back(column);
    column += joint.channels.size();
  }
  return offsets;
}

namespace {

bool is_hand_joint(const std::string& name) {
  if (name == "RightHand" || name == "LeftHand") return false;
  return name.find("Hand") != std::string::npos;
}

}  // namespace

JointPartition partition_joints(const Skeleton& skeleton) {
  JointPartition partition;
  for (std::size_t j = 1; j < skeleton.size(); ++j) {
    (is_hand_joint(skeleton[j].name) ? partition.hands : partition.body).push_back(j);
  }
  return partition;
}

JointSelection parse_joint_selection(const std::string& name) {
  if (name == "body") return JointSelection::Body;
  if (name == "hands") return JointSelection::Hands;
  if (name == "all") return JointSelection::All;
  throw std::invalid_argument("unknown joint selection '" + name + "' (body|hands|all)");
}

std::vector<std::size_t> select_joints(const Skeleton& skeleton, JointSelection selection) {
  const JointPartition partition = partition_joints(skeleton);
  switch (selection) {
    case JointSelection::Body: return partition.body;
    case JointSelection::Hands: return partition.hands;
    case JointSelection::All: break;
  }
  std::vector<std::size_t> all(skeleton.size());
  for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
  return all;
}

namespace {

struct JointSpec {
  const char* name;
  const char* parent;
  double x, y, z;
};

void append_joint(Skeleton& skeleton, const std::string& name, const std::string& parent,
                  const Eigen::Vector3d& offset) {
  Joint joint;
  joint.name = name;
  for (std::size_t j = 0; j < skeleton.size(); ++j) {
    if (skeleton[j].name == parent) joint.parent = j;
  }
  joint.offset = offset;
  joint.channels = {Channel::Zrotation, Channel::Xrotation, Channel::Yrotation};
  skeleton.push_back(std::move(joint));
}

void append_hand(Skeleton& skeleton, const std::string& side, double sign) {
  static const char* fingers[] = {"Thumb", "Index", "Middle", "Ring", "Pinky"};
  const std::string wrist = side + "Hand";
  for (int f = 0; f < 5; ++f) {
    const std::string finger = fingers[f];
    const double spread = 2.0 * (f - 2);
    std::string parent = wrist;
    if (finger != "Thumb") {
      // metacarpal
      const std::string in_hand = side + "HandIn" + finger;
      append_joint(skeleton, in_hand, wrist, {sign * 3.0, 0.0, spread});
      parent = in_hand;
    }
    for (int k = 1; k <= 4; ++k) {
      const std::string name = side + "Hand" + finger + std::to_string(k);
      const double length = k == 1 ? 5.0 : 3.0 - 0.4 * k;
      append_joint(skeleton, name, parent, {sign * length, 0.0, k == 1 ? spread : 0.0});
      parent = name;
    }
  }
}

}  // namespace

Skeleton beat_skeleton() {
  Skeleton skeleton;
  Joint root;
  root.name = "Hips";
  root.offset = Eigen::Vector3d(0.0, 95.0, 0.0);
  root.channels = {Channel::Xposition, Channel::Yposition, Channel::Zposition,
                   Channel::Zrotation, Channel::Xrotation, Channel::Yrotation};
  skeleton.push_back(root);

  static const JointSpec spine[] = {
      {"Spine", "Hips", 0, 10, 0},         {"Spine1", "Spine", 0, 10, 0},
      {"Spine2", "Spine1", 0, 10, 0},      {"Spine3", "Spine2", 0, 10, 0},
      {"Neck", "Spine3", 0, 8, 0},         {"Neck1", "Neck", 0, 5, 0},
      {"Head", "Neck1", 0, 8, 0},
  };
  for (const auto& s : spine) append_joint(skeleton, s.name, s.parent, {s.x, s.y, s.z});

  for (const auto& [side, sign] : {std::pair<std::string, double>{"Right", -1.0}, {"Left", 1.0}}) {
    append_joint(skeleton, side + "Shoulder", "Spine3", {sign * 4.0, 6.0, 0.0});
    append_joint(skeleton, side + "Arm", side + "Shoulder", {sign * 14.0, 0.0, 0.0});
    append_joint(skeleton, side + "ForeArm", side + "Arm", {sign * 28.0, 0.0, 0.0});
    append_joint(skeleton, side + "Hand", side + "ForeArm", {sign * 25.0, 0.0, 0.0});
    append_hand(skeleton, side, sign);
  }
  for (const auto& [side, sign] : {std::pair<std::string, double>{"Right", -1.0}, {"Left", 1.0}}) {
    append_joint(skeleton, side + "UpLeg", "Hips", {sign * 9.0, 0.0, 0.0});
    append_joint(skeleton, side + "Leg", side + "UpLeg", {0.0, -42.0, 0.0});
    append_joint(skeleton, side + "Foot", side + "Leg", {0.0, -40.0, 0.0});
    append_joint(skeleton, side + "ForeFoot", side + "Foot", {0.0, -6.0, 8.0});
    append_joint(skeleton, side + "ToeBase", side + "ForeFoot", {0.0, 0.0, 5.0});
    append_joint(skeleton, side + "ToeBaseEnd", side + "ToeBase", {0.0, 0.0, 3.0});
  }
  return skeleton;
}

RowMatrix gather_rotations(const MotionClip& clip, const std::vector<std::size_t>& joints) {
  const auto offsets = channel_offsets(clip.skeleton);
  RowMatrix out(clip.frames.rows(), static_cast<Eigen::Index>(3 * joints.size()));
  for (std::size_t k = 0; k < joints.size(); ++k) {
    const Joint& joint = clip.skeleton.at(joints[k]);
    std::size_t column = offsets[joints[k]];
    std::size_t written = 0;
    for (Channel c : joint.channels) {
      if (is_rotation(c)) {
        out.col(static_cast<Eigen::Index>(3 * k + written)) =
            clip.frames.col(static_cast<Eigen::Index>(column));
        ++written;
      }
      ++column;
    }
  }
  return out;
}

void scatter_rotations(MotionClip& clip, const std::vector<std::size_t>& joints,
                       const RowMatrix& rotations) {
  if (rotations.cols() != static_cast<Eigen::Index>(3 * joints.size()) ||
      rotations.rows() != clip.frames.rows()) {
    throw DataMismatch("rotation block does not match clip/joint selection");
  }
  const auto offsets = channel_offsets(clip.skeleton);
  for (std::size_t k = 0; k < joints.size(); ++k) {
    const Joint& joint = clip.skeleton.at(joints[k]);
    std::size_t column = offsets[joints[k]];
    std::size_t written = 0;
    for (Channel c : joint.channels) {
      if (is_rotation(c)) {
        clip.frames.col(static_cast<Eigen::Index>(column)) =
            rotations.col(static_cast<Eigen::Index>(3 * k + written));
        ++written;
      }
      ++column;
    }
  }
}

}  // namespace beat

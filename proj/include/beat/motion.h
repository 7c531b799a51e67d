#pragma once

// Core motion/audio/text value types shared by the parsers, metrics and the
// gesture model. Units follow the release files: centimeters and degrees.

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace beat {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Channel { Xposition, Yposition, Zposition, Xrotation, Yrotation, Zrotation };

const char* channel_name(Channel c);
std::optional<Channel> parse_channel(const std::string& name);
inline bool is_rotation(Channel c) {
  return c == Channel::Xrotation || c == Channel::Yrotation || c == Channel::Zrotation;
}

struct Joint {
  std::string name;
  std::optional<std::size_t> parent;
  Eigen::Vector3d offset = Eigen::Vector3d::Zero();
  std::vector<Channel> channels;
  // Offset of the "End Site" child, if the joint carries one. Kept only so a
  // parsed hierarchy writes back unchanged.
  std::optional<Eigen::Vector3d> end_site;
};

using Skeleton = std::vector<Joint>;

// Throws beat::DataMismatch when the skeleton violates the joint invariants:
// root with 6 channels, 3 rotation channels elsewhere, parents before children.
void validate_skeleton(const Skeleton& skeleton);

std::size_t channel_count(const Skeleton& skeleton);

// Column index of each joint's first channel in a frame row.
std::vector<std::size_t> channel_offsets(const Skeleton& skeleton);

struct MotionClip {
  Skeleton skeleton;
  double fps = 30.0;
  RowMatrix frames;  // T x C

  std::size_t frame_count() const { return static_cast<std::size_t>(frames.rows()); }
  std::size_t channel_count() const { return static_cast<std::size_t>(frames.cols()); }
};

// Global joint positions, one row per frame laid out as x0 y0 z0 x1 y1 z1 ...
struct PositionTrack {
  double fps = 30.0;
  std::vector<std::string> joint_names;
  RowMatrix positions;  // T x 3J

  std::size_t frame_count() const { return static_cast<std::size_t>(positions.rows()); }
  std::size_t joint_count() const { return joint_names.size(); }
  Eigen::Vector3d at(std::size_t frame, std::size_t joint) const {
    return positions.block<1, 3>(static_cast<Eigen::Index>(frame),
                                 static_cast<Eigen::Index>(3 * joint))
        .transpose();
  }
};

inline constexpr std::size_t kBlendshapeCount = 52;

const std::array<std::string, kBlendshapeCount>& blendshape_names();

struct BlendshapeTrack {
  double fps = 60.0;
  std::vector<std::string> names;  // canonical order
  RowMatrix weights;               // T x 52, each in [0,1]

  std::size_t frame_count() const { return static_cast<std::size_t>(weights.rows()); }
};

struct AudioTrack {
  double sample_rate = 48000.0;
  std::vector<std::vector<double>> channels;  // each in [-1,1], equal length

  std::size_t channel_count() const { return channels.size(); }
  std::size_t sample_count() const { return channels.empty() ? 0 : channels.front().size(); }
  double duration() const { return static_cast<double>(sample_count()) / sample_rate; }
};

inline const std::string kPadToken = "<PAD>";

struct AlignedWord {
  std::string token;
  double start = 0.0;
  double end = 0.0;

  bool operator==(const AlignedWord&) const = default;
};

struct AlignedTranscript {
  std::vector<AlignedWord> entries;
};

}  // namespace beat

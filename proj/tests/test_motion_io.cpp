#include "support.h"

#include "beat/audio.h"
#include "beat/blendshape.h"
#include "beat/bvh.h"
#include "beat/csv.h"
#include "beat/errors.h"
#include "beat/kinematics.h"
#include "beat/resample.h"
#include "beat/skeleton.h"
#include "beat/textgrid.h"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <numbers>

using namespace beat;
using beat::testing::random_clip;
using beat::testing::random_skeleton;

namespace {

constexpr const char* kTwoJoint = R"(HIERARCHY
ROOT Hips
{
  OFFSET 0 0 0
  CHANNELS 6 Xposition Yposition Zposition Zrotation Xrotation Yrotation
  JOINT Arm
  {
    OFFSET 10 0 0
    CHANNELS 3 Zrotation Xrotation Yrotation
    End Site
    {
      OFFSET 5 0 0
    }
  }
}
MOTION
Frames: 2
Frame Time: 0.0333333
1 2 3 0 0 0 0 0 0
0 0 0 90 0 0 0 0 0
)";

std::size_t parse_error_line(std::string_view text) {
  try {
    parse_bvh(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(Bvh, ParsesHierarchyAndMotion) {
  const MotionClip clip = parse_bvh(kTwoJoint);
  ASSERT_EQ(clip.skeleton.size(), 2u);
  EXPECT_EQ(clip.skeleton[1].name, "Arm");
  EXPECT_EQ(clip.skeleton[1].parent, 0u);
  EXPECT_EQ(clip.fps, 30.0);
  EXPECT_EQ(clip.frame_count(), 2u);
  EXPECT_EQ(clip.channel_count(), 9u);
  EXPECT_DOUBLE_EQ(clip.frames(1, 3), 90.0);
  ASSERT_TRUE(clip.skeleton[1].end_site.has_value());
  EXPECT_DOUBLE_EQ(clip.skeleton[1].end_site->x(), 5.0);
}

TEST(Bvh, ReleaseSkeletonHas231Channels) {
  const Skeleton s = beat_skeleton();
  EXPECT_EQ(channel_count(s), 231u);
  const JointPartition parts = partition_joints(s);
  EXPECT_EQ(parts.body.size(), 27u);
  EXPECT_EQ(parts.hands.size(), 48u);
  MotionClip clip;
  clip.skeleton = s;
  clip.frames = RowMatrix::Zero(3, 231);
  const MotionClip back = parse_bvh(write_bvh(clip));
  EXPECT_EQ(back.channel_count(), 231u);
  EXPECT_EQ(back.skeleton.size(), s.size());
}

TEST(Bvh, RoundTripKeepsValues) {
  ndiff::Rng rng(11);
  const MotionClip clip = random_clip(rng, random_skeleton(rng, 9), 7, 60);
  const MotionClip back = parse_bvh(write_bvh(clip));
  ASSERT_EQ(back.skeleton.size(), clip.skeleton.size());
  for (std::size_t j = 0; j < clip.skeleton.size(); ++j) {
    EXPECT_EQ(back.skeleton[j].name, clip.skeleton[j].name);
    EXPECT_EQ(back.skeleton[j].parent, clip.skeleton[j].parent);
    EXPECT_EQ(back.skeleton[j].channels, clip.skeleton[j].channels);
    EXPECT_LT((back.skeleton[j].offset - clip.skeleton[j].offset).norm(), 1e-5);
  }
  EXPECT_EQ(back.fps, 60.0);
  EXPECT_LT((back.frames - clip.frames).cwiseAbs().maxCoeff(), 1e-5);
}

TEST(Bvh, ErrorsCarryLineNumbers) {
  std::string text = kTwoJoint;
  EXPECT_EQ(parse_error_line(std::string(text).replace(text.find("0 0 0 90"), 1, "x")), 20u);
  EXPECT_EQ(parse_error_line(std::string(text).replace(text.find("CHANNELS 3"), 10, "CHANNELS 4")), 10u);
  // Short frame row.
  EXPECT_GT(parse_error_line(std::string(text).replace(text.find("0 0 0 90 0 0 0 0 0"), 18, "0 0 0 90")), 0u);
  // Declared frame count larger than the rows present.
  EXPECT_THROW(parse_bvh(std::string(text).replace(text.find("Frames: 2"), 9, "Frames: 3")), ParseError);
  EXPECT_THROW(parse_bvh(""), ParseError);
}

TEST(Kinematics, ZeroRotationIsPrefixSumOfOffsets) {
  const MotionClip clip = parse_bvh(kTwoJoint);
  const PositionTrack p = forward_kinematics(clip);
  ASSERT_EQ(p.joint_count(), 2u);
  EXPECT_EQ(p.at(0, 0), Eigen::Vector3d(1, 2, 3));
  EXPECT_EQ(p.at(0, 1), Eigen::Vector3d(11, 2, 3));
}

TEST(Kinematics, NinetyDegreesAboutZ) {
  const PositionTrack p = forward_kinematics(parse_bvh(kTwoJoint));
  EXPECT_LT((p.at(1, 1) - Eigen::Vector3d(0, 10, 0)).norm(), 1e-6);
}

TEST(Kinematics, EulerOrderMatters) {
  const RotationOrder zxy = RotationOrder::parse("ZXY");
  const RotationOrder xyz = RotationOrder::parse("XYZ");
  EXPECT_EQ(zxy.str(), "ZXY");
  const Eigen::Vector3d deg(30, 60, 0);
  const Eigen::Matrix3d a = euler_to_matrix(deg, zxy);
  const Eigen::Matrix3d expected =
      (Eigen::AngleAxisd(std::numbers::pi / 6, Eigen::Vector3d::UnitZ()) *
       Eigen::AngleAxisd(std::numbers::pi / 3, Eigen::Vector3d::UnitX()))
          .toRotationMatrix();
  EXPECT_LT((a - expected).norm(), 1e-12);
  EXPECT_GT((a - euler_to_matrix(deg, xyz)).norm(), 0.1);
  EXPECT_THROW(RotationOrder::parse("XXY"), std::invalid_argument);
  EXPECT_THROW(RotationOrder::parse("XY"), std::invalid_argument);
}

TEST(Kinematics, PositionsCsvHasOneRowPerFrameAndJoint) {
  const std::string csv = positions_to_csv(forward_kinematics(parse_bvh(kTwoJoint)));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,joint,x,y,z");
}

TEST(Resample, IntegerRatioKeepsEveryKthFrame) {
  RowMatrix f(7, 2);
  for (int t = 0; t < 7; ++t) f.row(t) << t, 10.0 * t;
  const RowMatrix r = resample_frames(f, 120, 60);
  ASSERT_EQ(r.rows(), 4);
  for (int t = 0; t < 4; ++t) EXPECT_EQ(r(t, 1), 20.0 * t);
}

TEST(Resample, NonIntegerRatioInterpolatesLinearly) {
  RowMatrix f(5, 1);
  f << 0, 1, 2, 3, 4;
  const RowMatrix r = resample_frames(f, 60, 25);
  ASSERT_EQ(r.rows(), 2);  // floor(4 * 25 / 60) + 1
  EXPECT_NEAR(r(1, 0), 60.0 / 25.0, 1e-12);
}

TEST(TextGrid, RoundTripAndFraming) {
  AlignedTranscript t;
  t.entries = {{"so", 0.0, 0.4}, {kPadToken, 0.4, 0.8}, {"huge", 0.8, 1.5}};
  const AlignedTranscript back = parse_textgrid(write_textgrid(t));
  ASSERT_EQ(back.entries.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back.entries[i].token, t.entries[i].token);
    EXPECT_NEAR(back.entries[i].start, t.entries[i].start, 1e-9);
    EXPECT_NEAR(back.entries[i].end, t.entries[i].end, 1e-9);
  }
  const auto words = frame_words(t, 10, 16);
  EXPECT_EQ(words[0], "so");
  EXPECT_EQ(words[4], kPadToken);
  EXPECT_EQ(words[14], "huge");
  EXPECT_EQ(words[15], kPadToken);
}

TEST(TextGrid, ShortFormAndTierSelection) {
  const std::string text = "File type = \"ooTextFile\"\nObject class = \"TextGrid\"\n\n0\n1\n<exists>\n2\n"
                           "\"IntervalTier\"\n\"phones\"\n0\n1\n1\n0\n1\n\"a\"\n"
                           "\"IntervalTier\"\n\"Words\"\n0\n1\n2\n0\n0.5\n\"hi\"\n0.5\n1\n\"\"\n";
  const AlignedTranscript t = parse_textgrid(text);
  ASSERT_EQ(t.entries.size(), 2u);
  EXPECT_EQ(t.entries[0].token, "hi");
  EXPECT_EQ(t.entries[1].token, kPadToken);
}

TEST(TextGrid, RejectsOverlapsAndGarbage) {
  AlignedTranscript t;
  t.entries = {{"a", 0.0, 0.6}, {"b", 0.5, 1.0}};
  EXPECT_THROW(validate_transcript(t), DataMismatch);
  EXPECT_THROW(parse_textgrid("not a textgrid"), ParseError);
}

TEST(Blendshape, ParsesAllChannelsAndClamps) {
  nlohmann::json doc;
  doc["fps"] = 60;
  for (const auto& name : blendshape_names()) doc["channels"][name] = {0.1, 0.5, 1.2};
  const BlendshapeParse p = parse_blendshapes(doc.dump());
  EXPECT_EQ(p.track.frame_count(), 3u);
  EXPECT_EQ(p.clamped, kBlendshapeCount);
  EXPECT_DOUBLE_EQ(p.track.weights(2, 7), 1.0);
  const BlendshapeParse back = parse_blendshapes(write_blendshapes(p.track));
  EXPECT_LT((back.track.weights - p.track.weights).cwiseAbs().maxCoeff(), 1e-9);

  doc["channels"].erase(blendshape_names()[3]);
  EXPECT_THROW(parse_blendshapes(doc.dump()), ParseError);
  EXPECT_THROW(parse_blendshapes("{"), ParseError);
}

TEST(Audio, WavRoundTrip) {
  AudioTrack a;
  a.sample_rate = 8000;
  a.channels = {{0.0, 0.5, -0.5, 1.0, -1.0}, {0.25, 0.0, 0.1, -0.2, 0.3}};
  const AudioTrack pcm = read_audio(write_audio(a));
  ASSERT_EQ(pcm.channel_count(), 2u);
  EXPECT_EQ(pcm.sample_rate, 8000.0);
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(pcm.channels[c][i], a.channels[c][i], 1.0 / 32767);
  const AudioTrack f = read_audio(write_audio(a, WavEncoding::Float32));
  for (std::size_t i = 0; i < 5; ++i) EXPECT_FLOAT_EQ(f.channels[1][i], a.channels[1][i]);
  EXPECT_THROW(read_audio(std::vector<std::uint8_t>{'R', 'I', 'F', 'F'}), ParseError);
}

TEST(Audio, DownmixAndFraming) {
  AudioTrack a;
  a.sample_rate = 4;
  a.channels = {{1, 1, 1, 1, 1, 1, 1, 1}, {0, 0, 0, 0, 0, 0, 0, 0}};
  const AudioTrack mono = downmix_resample(a, 2);
  ASSERT_EQ(mono.channel_count(), 1u);
  EXPECT_EQ(mono.sample_count(), 4u);
  EXPECT_DOUBLE_EQ(mono.channels[0][2], 0.5);
  const RowMatrix f = frame_audio(mono, 1, 3, 3);
  EXPECT_EQ(f.rows(), 3);
  EXPECT_EQ(f(1, 1), 0.5);
  EXPECT_EQ(f(2, 0), 0.0);  // starts at sample 4, past the end
}

TEST(Csv, MatrixAndScores) {
  const Eigen::MatrixXd m = parse_matrix_csv("a,b\n1,2\n3,4\n");
  ASSERT_EQ(m.rows(), 2);
  EXPECT_EQ(m(1, 0), 3.0);
  EXPECT_THROW(parse_matrix_csv("1,2\n3\n"), ParseError);
  const ScoreTrack s = parse_score_csv("t,score\n0,0.5\n0.0333,1\n", 30);
  EXPECT_EQ(s.scores, (std::vector<double>{0.5, 1.0}));
  const ScoreTrack back = parse_score_csv(scores_to_csv(s), 30);
  EXPECT_EQ(back.scores, s.scores);
}

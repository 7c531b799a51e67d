#include "beat/resample.h"

#include "beat/errors.h"

#include <cmath>
#include <stdexcept>

namespace beat {

RowMatrix resample_frames(const RowMatrix& frames, double source_fps, double target_fps) {
  if (!(target_fps > 0.0) || !(source_fps > 0.0)) {
    throw std::invalid_argument("frame rates must be positive");
  }
  const Eigen::Index T = frames.rows();
  if (T == 0) throw DataMismatch("cannot resample an empty clip");
  if (source_fps == target_fps) return frames;

  const double ratio = source_fps / target_fps;
  const double k = std::round(ratio);
  const Eigen::Index out_rows =
      static_cast<Eigen::Index>(std::floor(static_cast<double>(T - 1) / ratio + 1e-9)) + 1;
  RowMatrix out(out_rows, frames.cols());

  if (k >= 1.0 && std::abs(ratio - k) < 1e-9) {
    const auto step = static_cast<Eigen::Index>(k);
    for (Eigen::Index i = 0; i < out_rows; ++i) out.row(i) = frames.row(i * step);
    return out;
  }
  for (Eigen::Index i = 0; i < out_rows; ++i) {
    const double position = static_cast<double>(i) * ratio;
    auto lo = static_cast<Eigen::Index>(std::floor(position));
    lo = std::min(lo, T - 1);
    const Eigen::Index hi = std::min(lo + 1, T - 1);
    const double w = position - static_cast<double>(lo);
    out.row(i) = (1.0 - w) * frames.row(lo) + w * frames.row(hi);
  }
  return out;
}

MotionClip resample(const MotionClip& clip, double target_fps) {
  MotionClip out;
  out.skeleton = clip.skeleton;
  out.frames = resample_frames(clip.frames, clip.fps, target_fps);
  out.fps = target_fps;
  return out;
}

BlendshapeTrack resample(const BlendshapeTrack& track, double target_fps) {
  BlendshapeTrack out;
  out.names = track.names;
  out.weights = resample_frames(track.weights, track.fps, target_fps);
  out.fps = target_fps;
  return out;
}

}  // namespace beat

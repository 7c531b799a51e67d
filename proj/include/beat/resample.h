#pragma once

#include "beat/motion.h"

namespace beat {

// Frame-rate conversion for per-frame channel matrices. When the source rate
// is an integer multiple k of the target, every k-th frame starting at frame 0
// is kept; otherwise each channel is linearly interpolated at i / target_fps.
// Output length is floor((T - 1) * target / source) + 1.
RowMatrix resample_frames(const RowMatrix& frames, double source_fps, double target_fps);

MotionClip resample(const MotionClip& clip, double target_fps);
BlendshapeTrack resample(const BlendshapeTrack& track, double target_fps);

}  // namespace beat

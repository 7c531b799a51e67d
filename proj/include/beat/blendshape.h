#pragma once

#include "beat/motion.h"

#include <cstddef>
#include <string>
#include <string_view>

namespace beat {

struct BlendshapeParse {
  BlendshapeTrack track;
  std::size_t clamped = 0;  // weights outside [0,1] that were clamped
};

// Reads {"fps": 60, "channels": {"eyeBlinkLeft": [w, ...], ...}}. All 52
// canonical channels must be present with equal-length arrays; unknown
// channel names are rejected.
BlendshapeParse parse_blendshapes(std::string_view json_text);

std::string write_blendshapes(const BlendshapeTrack& track);

}  // namespace beat

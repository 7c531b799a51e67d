#pragma once

#include "beat/camn/model.h"

#include <cstdint>
#include <vector>

namespace beat::camn {

// Synthetic multi-modal sequences for desk-scale training. Poses are a
// fixed per-channel rest offset plus small speaker-dependent oscillations
// phase-locked to the audio carrier.
std::vector<ModalityBatch> toy_corpus(const CamnConfig& config, std::size_t sequences = 10, std::size_t frames = 64,
                                      std::uint64_t seed = 7);

}  // namespace beat::camn

#pragma once

#include "beat/camn/model.h"

namespace beat::camn {

struct GestureOutput {
  Tensor body;   // T x body_dim
  Tensor hands;  // T x hand_dim
  Tensor fused;  // T x fused_dim, with the pose slots actually fed back
};

// Autoregressive rollout over `frames` frames. The modalities must cover
// that many frames (targets are ignored). Frames below the seed length are
// the seed verbatim; afterwards each frame's pose slot holds the previous
// output. Throws DataMismatch when frames < seed length or the seed shape
// is wrong.
GestureOutput synthesize(Camn& model, const ModalityBatch& modalities, const Tensor& seed_body,
                         const Tensor& seed_hands, std::size_t frames, const Ablation& ablation = {});

}  // namespace beat::camn

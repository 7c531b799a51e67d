#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace beat::camn {

struct CamnConfig {
  // Context half-window f: every temporal encoder sees frames i-f..i+f.
  std::size_t context = 32;

  std::size_t text_dim = 128;
  std::size_t id_dim = 8;
  std::size_t emotion_dim = 8;
  std::size_t audio_dim = 128;
  std::size_t face_dim = 32;
  std::size_t body_hidden = 256;
  std::size_t hand_hidden = 256;

  std::size_t speakers = 30;
  std::size_t emotions = 8;
  std::size_t word_dim = 300;
  std::size_t audio_samples = 800;  // 24 kHz at 30 FPS
  std::size_t blendshapes = 52;
  std::size_t body_joints = 27;
  std::size_t hand_joints = 48;
  std::size_t seed_length = 8;

  std::size_t kernel = 3;
  std::size_t text_layers = 8;
  std::size_t emotion_layers = 4;
  std::size_t audio_layers = 12;
  std::size_t face_layers = 8;
  std::size_t disc_layers = 4;
  std::size_t disc_channels = 64;

  double alpha = 0.02;
  double beta0 = 100.0;
  double beta1 = 20.0;
  double lr = 2e-4;
  // Discriminator learning rate as a fraction of lr.
  double disc_lr_scale = 0.1;

  std::size_t body_dim() const { return body_joints * 3; }
  std::size_t hand_dim() const { return hand_joints * 3; }
  std::size_t encoded_dim() const { return text_dim + id_dim + emotion_dim + audio_dim + face_dim; }
  std::size_t fused_dim() const { return encoded_dim() + body_dim() + hand_dim(); }

  // Throws std::invalid_argument naming the first bad field.
  void validate() const;

  // Latent widths and input sizes scaled down by 8; joint counts, context
  // and layer counts unchanged.
  static CamnConfig toy();
};

// Per-layer dilations for a stack of kernel-3 layers whose combined reach is
// exactly `reach` frames each side: doubling from 1, restarting at 1 when the
// remaining layers would otherwise run out, last layer takes the remainder.
std::vector<std::size_t> dilation_schedule(std::size_t layers, std::size_t reach);

// Frames each side seen by a same-padded stack with these dilations.
std::size_t receptive_reach(const std::vector<std::size_t>& dilations, std::size_t kernel);

std::string config_to_json(const CamnConfig& config);
CamnConfig config_from_json(const std::string& text);

}  // namespace beat::camn

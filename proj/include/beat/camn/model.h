#pragma once

#include "beat/camn/config.h"
#include "beat/ndiff/ops.h"
#include "beat/ndiff/tape.h"

#include <cstdint>
#include <string>
#include <vector>

namespace beat::camn {

using ndiff::Tape;
using ndiff::Tensor;
using ndiff::Var;

// One aligned multi-modal sequence of T frames.
struct ModalityBatch {
  Tensor words;                        // T x word_dim, pre-embedded
  std::size_t speaker = 0;
  std::vector<std::size_t> emotions;   // T
  Tensor audio;                        // T x audio_samples
  Tensor face;                         // T x blendshapes
  Tensor body;                         // T x body_dim
  Tensor hands;                        // T x hand_dim
  std::vector<double> lambda;          // T, semantic relevance

  std::size_t frames() const { return emotions.size(); }
  // Throws DataMismatch on any shape or range violation.
  void validate(const CamnConfig& config, bool needs_targets = true) const;
};

// Inputs removed by an ablation are replaced by zeros, which downstream
// cascade stages then see. `semantic` drops the lambda weighting (lambda = 1).
// `body_cascade` withholds the body latent from the hand decoder.
struct Ablation {
  bool text = false;
  bool audio = false;
  bool face = false;
  bool emotion = false;
  bool id = false;
  bool semantic = false;
  bool body_cascade = false;

  // Accepts text|audio|face|emotion|id|semantic; throws on anything else.
  void drop(const std::string& name);
  std::string describe() const;
};

struct Encoded {
  Var text;     // T x text_dim
  Var id;       // T x id_dim, one row repeated
  Var emotion;  // T x emotion_dim
  Var audio;    // T x audio_dim
  Var face;     // T x face_dim
};

struct Decoded {
  Var fused;        // T x fused_dim
  Var body_latent;  // T x body_hidden
  Var body;         // T x body_dim
  Var hands;        // T x hand_dim
};

// Pose slots for teacher forcing: slot i holds pose i-1, slot 0 holds pose 0.
Tensor previous_pose_slots(const Tensor& poses);

class Camn {
 public:
  Camn(CamnConfig config, std::uint64_t seed);

  const CamnConfig& config() const { return config_; }
  std::uint64_t seed() const { return seed_; }
  ndiff::ParameterSet& generator() { return generator_; }
  const ndiff::ParameterSet& generator() const { return generator_; }
  ndiff::ParameterSet& discriminator() { return discriminator_; }
  const ndiff::ParameterSet& discriminator() const { return discriminator_; }

  Var encode_text(Tape& tape, const Tensor& words);
  Var encode_id(Tape& tape, std::size_t speaker, std::size_t frames);
  Var encode_emotion(Tape& tape, const std::vector<std::size_t>& emotions);
  Var encode_audio(Tape& tape, const Tensor& audio, Var text, Var emotion, Var id);
  Var encode_face(Tape& tape, const Tensor& face, Var text, Var emotion, Var id, Var audio);
  Encoded encode(Tape& tape, const ModalityBatch& batch, const Ablation& ablation = {});

  // Feature-axis concatenation [text, id, emotion, audio, face, body, hands].
  Var fuse(const Encoded& encoded, Var body_slots, Var hand_slots);
  Decoded decode(Tape& tape, Var fused, const Ablation& ablation = {});

  // Teacher-forced generator pass over ground-truth pose slots.
  Decoded forward(Tape& tape, const ModalityBatch& batch, const Ablation& ablation = {});

  // Sequence-level realness score in (0, 1), shape 1 x 1.
  Var discriminate(Tape& tape, Var body, Var hands);

  struct Layer {
    ndiff::Parameter* kernel = nullptr;
    ndiff::Parameter* bias = nullptr;
    ndiff::Parameter* skip = nullptr;  // null when channel counts match
    std::size_t dilation = 1;
  };
  struct Dense {
    ndiff::Parameter* weight = nullptr;
    ndiff::Parameter* bias = nullptr;
  };
  struct Lstm {
    ndiff::Parameter* wx = nullptr;
    ndiff::Parameter* wh = nullptr;
    ndiff::Parameter* bias = nullptr;
  };

  const Lstm& body_lstm() const { return body_lstm_; }
  const Lstm& hand_lstm() const { return hand_lstm_; }
  const std::vector<Dense>& body_head() const { return body_head_; }
  const std::vector<Dense>& hand_head() const { return hand_head_; }

 private:
  std::vector<Layer> make_stack(const std::string& prefix, std::size_t in, std::size_t width, std::size_t layers,
                                ndiff::Rng& rng);
  std::vector<Dense> make_mlp(const std::string& prefix, std::size_t in, std::size_t hidden, std::size_t out,
                              ndiff::Rng& rng);
  Lstm make_lstm(const std::string& prefix, std::size_t in, std::size_t hidden, ndiff::Rng& rng);

  CamnConfig config_;
  std::uint64_t seed_;
  ndiff::ParameterSet generator_;
  ndiff::ParameterSet discriminator_;

  std::vector<Layer> text_stack_;
  ndiff::Parameter* id_table_ = nullptr;
  ndiff::Parameter* emotion_table_ = nullptr;
  std::vector<Layer> emotion_stack_;
  std::vector<Layer> audio_stack_;
  std::vector<Dense> audio_mlp_;
  std::vector<Layer> face_stack_;
  std::vector<Dense> face_mlp_;
  Lstm body_lstm_;
  std::vector<Dense> body_head_;
  Lstm hand_lstm_;
  std::vector<Dense> hand_head_;
  std::vector<Layer> disc_stack_;
  Dense disc_out_;
};

// Temporal stack and MLP evaluation on a tape, shared with the discriminator.
Var run_stack(Tape& tape, const std::vector<Camn::Layer>& stack, Var x);
Var run_mlp(Tape& tape, const std::vector<Camn::Dense>& mlp, Var x);

}  // namespace beat::camn

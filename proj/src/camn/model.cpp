#include "beat/camn/model.h"

#include "beat/errors.h"

#include <stdexcept>

namespace beat::camn {

using ndiff::Parameter;
using ndiff::Rng;

namespace {

void require_shape(const Tensor& t, std::size_t rows, std::size_t cols, const char* what) {
  if (t.rank() != 2 || t.rows() != rows || t.cols() != cols) {
    throw DataMismatch(std::string(what) + " has shape " + ndiff::shape_string(t.shape()) + ", expected (" +
                       std::to_string(rows) + "," + std::to_string(cols) + ")");
  }
}

Var zeros(Tape& tape, std::size_t rows, std::size_t cols) { return tape.constant(Tensor({rows, cols})); }

}  // namespace

void ModalityBatch::validate(const CamnConfig& config, bool needs_targets) const {
  const std::size_t T = frames();
  if (T == 0) throw DataMismatch("sequence has no frames");
  require_shape(words, T, config.word_dim, "word features");
  require_shape(audio, T, config.audio_samples, "audio frames");
  require_shape(face, T, config.blendshapes, "blendshape frames");
  if (speaker >= config.speakers) {
    throw DataMismatch("speaker id " + std::to_string(speaker) + " outside " + std::to_string(config.speakers));
  }
  for (std::size_t e : emotions) {
    if (e >= config.emotions) throw DataMismatch("emotion id " + std::to_string(e) + " out of range");
  }
  if (needs_targets) {
    require_shape(body, T, config.body_dim(), "body poses");
    require_shape(hands, T, config.hand_dim(), "hand poses");
    if (lambda.size() != T) throw DataMismatch("semantic scores do not cover every frame");
    for (double l : lambda) {
      if (!(l >= 0.0 && l <= 1.0)) throw DataMismatch("semantic score outside [0,1]");
    }
  }
}

void Ablation::drop(const std::string& name) {
  if (name == "text") text = true;
  else if (name == "audio") audio = true;
  else if (name == "face") face = true;
  else if (name == "emotion") emotion = true;
  else if (name == "id") id = true;
  else if (name == "semantic") semantic = true;
  else throw std::invalid_argument("unknown ablation '" + name + "'");
}

std::string Ablation::describe() const {
  std::string out;
  auto add = [&out](bool flag, const char* name) {
    if (!flag) return;
    if (!out.empty()) out += ",";
    out += name;
  };
  add(text, "text");
  add(audio, "audio");
  add(face, "face");
  add(emotion, "emotion");
  add(id, "id");
  add(semantic, "semantic");
  add(body_cascade, "body_cascade");
  return out.empty() ? "none" : out;
}

Tensor previous_pose_slots(const Tensor& poses) {
  Tensor slots(poses.shape());
  const std::size_t T = poses.rows();
  const std::size_t C = poses.cols();
  for (std::size_t t = 0; t < T; ++t) {
    const std::size_t src = t == 0 ? 0 : t - 1;
    for (std::size_t c = 0; c < C; ++c) slots.at(t, c) = poses.at(src, c);
  }
  return slots;
}

Camn::Camn(CamnConfig config, std::uint64_t seed) : config_(std::move(config)), seed_(seed) {
  config_.validate();
  const CamnConfig& c = config_;
  Rng rng(seed);

  text_stack_ = make_stack("text", c.word_dim, c.text_dim, c.text_layers, rng);
  id_table_ = &generator_.add_uniform("id.table", {c.speakers, c.id_dim}, 1, rng);
  emotion_table_ = &generator_.add_uniform("emotion.table", {c.emotions, c.emotion_dim}, 1, rng);
  emotion_stack_ = make_stack("emotion", c.emotion_dim, c.emotion_dim, c.emotion_layers, rng);
  audio_stack_ = make_stack("audio", c.audio_samples, c.audio_dim, c.audio_layers, rng);
  audio_mlp_ = make_mlp("audio.mlp", c.audio_dim + c.text_dim + c.emotion_dim + c.id_dim, c.audio_dim, c.audio_dim,
                        rng);
  face_stack_ = make_stack("face", c.blendshapes, c.face_dim, c.face_layers, rng);
  face_mlp_ = make_mlp("face.mlp", c.face_dim + c.text_dim + c.emotion_dim + c.id_dim + c.audio_dim, c.face_dim,
                       c.face_dim, rng);
  body_lstm_ = make_lstm("body.lstm", c.fused_dim(), c.body_hidden, rng);
  body_head_ = make_mlp("body.mlp", c.body_hidden, c.body_hidden, c.body_dim(), rng);
  hand_lstm_ = make_lstm("hand.lstm", c.fused_dim() + c.body_hidden, c.hand_hidden, rng);
  hand_head_ = make_mlp("hand.mlp", c.hand_hidden, c.hand_hidden, c.hand_dim(), rng);

  // The discriminator draws from its own stream so the generator
  // initialisation does not depend on its size.
  Rng disc_rng(seed ^ 0xD15C0000D15C0000ull);
  const std::size_t pose_dim = c.body_dim() + c.hand_dim();
  for (std::size_t l = 0; l < c.disc_layers; ++l) {
    const std::size_t in = l == 0 ? pose_dim : c.disc_channels;
    const std::string name = "disc.conv" + std::to_string(l);
    Layer layer;
    layer.kernel = &discriminator_.add_uniform(name + ".kernel", {c.disc_channels, in, c.kernel}, in * c.kernel, disc_rng);
    layer.bias = &discriminator_.add_uniform(name + ".bias", {c.disc_channels}, in * c.kernel, disc_rng);
    if (in != c.disc_channels) {
      layer.skip = &discriminator_.add_uniform(name + ".skip", {in, c.disc_channels}, in, disc_rng);
    }
    disc_stack_.push_back(layer);
  }
  disc_out_.weight = &discriminator_.add_uniform("disc.out.weight", {c.disc_channels, 1}, c.disc_channels, disc_rng);
  disc_out_.bias = &discriminator_.add_uniform("disc.out.bias", {1}, c.disc_channels, disc_rng);
}

std::vector<Camn::Layer> Camn::make_stack(const std::string& prefix, std::size_t in, std::size_t width,
                                          std::size_t layers, Rng& rng) {
  const std::size_t k = config_.kernel;
  const auto dilations = dilation_schedule(layers, config_.context / (k / 2));
  std::vector<Layer> stack;
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t cin = l == 0 ? in : width;
    const std::string name = prefix + ".tcn" + std::to_string(l);
    Layer layer;
    layer.dilation = dilations[l];
    layer.kernel = &generator_.add_uniform(name + ".kernel", {width, cin, k}, cin * k, rng);
    layer.bias = &generator_.add_uniform(name + ".bias", {width}, cin * k, rng);
    if (cin != width) layer.skip = &generator_.add_uniform(name + ".skip", {cin, width}, cin, rng);
    stack.push_back(layer);
  }
  return stack;
}

std::vector<Camn::Dense> Camn::make_mlp(const std::string& prefix, std::size_t in, std::size_t hidden,
                                        std::size_t out, Rng& rng) {
  std::vector<Dense> mlp(2);
  mlp[0].weight = &generator_.add_uniform(prefix + "0.weight", {in, hidden}, in, rng);
  mlp[0].bias = &generator_.add_uniform(prefix + "0.bias", {hidden}, in, rng);
  mlp[1].weight = &generator_.add_uniform(prefix + "1.weight", {hidden, out}, hidden, rng);
  mlp[1].bias = &generator_.add_uniform(prefix + "1.bias", {out}, hidden, rng);
  return mlp;
}

Camn::Lstm Camn::make_lstm(const std::string& prefix, std::size_t in, std::size_t hidden, Rng& rng) {
  Lstm lstm;
  lstm.wx = &generator_.add_uniform(prefix + ".wx", {in, 4 * hidden}, hidden, rng);
  lstm.wh = &generator_.add_uniform(prefix + ".wh", {hidden, 4 * hidden}, hidden, rng);
  lstm.bias = &generator_.add_uniform(prefix + ".bias", {4 * hidden}, hidden, rng);
  return lstm;
}

Var run_stack(Tape& tape, const std::vector<Camn::Layer>& stack, Var x) {
  for (const auto& layer : stack) {
    Var y = ndiff::leaky_relu(ndiff::conv1d(x, tape.param(*layer.kernel), tape.param(*layer.bias), layer.dilation));
    Var skip = layer.skip ? ndiff::matmul(x, tape.param(*layer.skip)) : x;
    x = ndiff::add(y, skip);
  }
  return x;
}

Var run_mlp(Tape& tape, const std::vector<Camn::Dense>& mlp, Var x) {
  for (std::size_t i = 0; i < mlp.size(); ++i) {
    x = ndiff::dense(x, tape.param(*mlp[i].weight), tape.param(*mlp[i].bias));
    if (i + 1 < mlp.size()) x = ndiff::leaky_relu(x);
  }
  return x;
}

Var Camn::encode_text(Tape& tape, const Tensor& words) {
  if (words.rank() != 2 || words.rows() == 0) throw DataMismatch("text encoder needs at least one frame");
  require_shape(words, words.rows(), config_.word_dim, "word features");
  return run_stack(tape, text_stack_, tape.constant(words));
}

Var Camn::encode_id(Tape& tape, std::size_t speaker, std::size_t frames) {
  if (speaker >= config_.speakers) throw DataMismatch("speaker id " + std::to_string(speaker) + " out of range");
  return ndiff::repeat_rows(ndiff::embedding({speaker}, tape.param(*id_table_)), frames);
}

Var Camn::encode_emotion(Tape& tape, const std::vector<std::size_t>& emotions) {
  for (std::size_t e : emotions) {
    if (e >= config_.emotions) throw DataMismatch("emotion id " + std::to_string(e) + " out of range");
  }
  return run_stack(tape, emotion_stack_, ndiff::embedding(emotions, tape.param(*emotion_table_)));
}

Var Camn::encode_audio(Tape& tape, const Tensor& audio, Var text, Var emotion, Var id) {
  const std::size_t T = text.value().rows();
  require_shape(audio, T, config_.audio_samples, "audio frames");
  Var h = run_stack(tape, audio_stack_, tape.constant(audio));
  return run_mlp(tape, audio_mlp_, ndiff::concat({h, text, emotion, id}, 1));
}

Var Camn::encode_face(Tape& tape, const Tensor& face, Var text, Var emotion, Var id, Var audio) {
  const std::size_t T = text.value().rows();
  require_shape(face, T, config_.blendshapes, "blendshape frames");
  Var h = run_stack(tape, face_stack_, tape.constant(face));
  return run_mlp(tape, face_mlp_, ndiff::concat({h, text, emotion, id, audio}, 1));
}

Encoded Camn::encode(Tape& tape, const ModalityBatch& batch, const Ablation& ablation) {
  batch.validate(config_, false);
  const std::size_t T = batch.frames();
  const CamnConfig& c = config_;
  Encoded e;
  e.text = ablation.text ? zeros(tape, T, c.text_dim) : encode_text(tape, batch.words);
  e.id = ablation.id ? zeros(tape, T, c.id_dim) : encode_id(tape, batch.speaker, T);
  e.emotion = ablation.emotion ? zeros(tape, T, c.emotion_dim) : encode_emotion(tape, batch.emotions);
  e.audio = ablation.audio ? zeros(tape, T, c.audio_dim) : encode_audio(tape, batch.audio, e.text, e.emotion, e.id);
  e.face = ablation.face ? zeros(tape, T, c.face_dim)
                         : encode_face(tape, batch.face, e.text, e.emotion, e.id, e.audio);
  return e;
}

Var Camn::fuse(const Encoded& encoded, Var body_slots, Var hand_slots) {
  const std::size_t T = encoded.text.value().rows();
  for (Var v : {encoded.id, encoded.emotion, encoded.audio, encoded.face, body_slots, hand_slots}) {
    if (v.value().rows() != T) throw DataMismatch("fused streams have different frame counts");
  }
  return ndiff::concat({encoded.text, encoded.id, encoded.emotion, encoded.audio, encoded.face, body_slots, hand_slots},
                       1);
}

Decoded Camn::decode(Tape& tape, Var fused, const Ablation& ablation) {
  if (fused.value().rank() != 2 || fused.value().cols() != config_.fused_dim()) {
    throw DataMismatch("fused features have width " + std::to_string(fused.value().cols()) + ", expected " +
                       std::to_string(config_.fused_dim()));
  }
  Decoded d;
  d.fused = fused;
  d.body_latent = ndiff::lstm_seq(fused, tape.param(*body_lstm_.wx), tape.param(*body_lstm_.wh),
                                  tape.param(*body_lstm_.bias));
  d.body = run_mlp(tape, body_head_, d.body_latent);
  Var cascade = ablation.body_cascade ? zeros(tape, fused.value().rows(), config_.body_hidden) : d.body_latent;
  Var hand_latent = ndiff::lstm_seq(ndiff::concat({fused, cascade}, 1), tape.param(*hand_lstm_.wx),
                                    tape.param(*hand_lstm_.wh), tape.param(*hand_lstm_.bias));
  d.hands = run_mlp(tape, hand_head_, hand_latent);
  return d;
}

Decoded Camn::forward(Tape& tape, const ModalityBatch& batch, const Ablation& ablation) {
  batch.validate(config_, true);
  const Encoded e = encode(tape, batch, ablation);
  Var body_slots = tape.constant(previous_pose_slots(batch.body));
  Var hand_slots = tape.constant(previous_pose_slots(batch.hands));
  return decode(tape, fuse(e, body_slots, hand_slots), ablation);
}

Var Camn::discriminate(Tape& tape, Var body, Var hands) {
  Var x = ndiff::concat({body, hands}, 1);
  if (x.value().cols() != config_.body_dim() + config_.hand_dim()) throw DataMismatch("discriminator input width");
  Var h = ndiff::mean_rows(run_stack(tape, disc_stack_, x));
  return ndiff::sigmoid(ndiff::dense(h, tape.param(*disc_out_.weight), tape.param(*disc_out_.bias)));
}

}  // namespace beat::camn

#include "beat/camn/toy_corpus.h"

#include <cmath>
#include <numbers>

namespace beat::camn {

std::vector<ModalityBatch> toy_corpus(const CamnConfig& config, std::size_t sequences, std::size_t frames,
                                      std::uint64_t seed) {
  ndiff::Rng rng(seed);
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const std::size_t B = config.body_dim(), H = config.hand_dim();

  auto rest = [&rng](std::size_t n) {
    std::vector<double> v(n);
    for (double& x : v) x = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(1.0, 2.0);
    return v;
  };
  const std::vector<double> body_rest = rest(B);
  const std::vector<double> hand_rest = rest(H);

  constexpr std::size_t kVocab = 16;
  Tensor vocab({kVocab, config.word_dim});
  for (double& v : vocab.data()) v = rng.normal();

  std::vector<ModalityBatch> corpus;
  for (std::size_t s = 0; s < sequences; ++s) {
    ModalityBatch b;
    b.speaker = s % config.speakers;
    b.emotions.assign(frames, s % config.emotions);
    b.words = Tensor({frames, config.word_dim});
    b.audio = Tensor({frames, config.audio_samples});
    b.face = Tensor({frames, config.blendshapes});
    b.body = Tensor({frames, B});
    b.hands = Tensor({frames, H});
    b.lambda.resize(frames);

    const double carrier = 2.0 + static_cast<double>(s % 5);  // cycles per second of the audio envelope
    const double phase = rng.uniform(0.0, kTwoPi);
    std::size_t word = rng.index(kVocab);
    for (std::size_t t = 0; t < frames; ++t) {
      if (t % 8 == 0) word = rng.index(kVocab);
      for (std::size_t j = 0; j < config.word_dim; ++j) b.words.at(t, j) = vocab.at(word, j);
      const double seconds = static_cast<double>(t) / 30.0;
      const double envelope = 0.5 + 0.5 * std::sin(kTwoPi * carrier * seconds + phase);
      for (std::size_t k = 0; k < config.audio_samples; ++k) {
        b.audio.at(t, k) = envelope * std::sin(kTwoPi * static_cast<double>(k) * 8.0 / static_cast<double>(config.audio_samples));
      }
      for (std::size_t k = 0; k < config.blendshapes; ++k) {
        b.face.at(t, k) = 0.5 + 0.3 * std::sin(kTwoPi * carrier * seconds + phase + 0.1 * static_cast<double>(k));
      }
      for (std::size_t j = 0; j < B; ++j) {
        b.body.at(t, j) = body_rest[j] + 0.1 * envelope * std::sin(0.37 * static_cast<double>(j) + phase);
      }
      for (std::size_t j = 0; j < H; ++j) {
        b.hands.at(t, j) = hand_rest[j] + 0.1 * envelope * std::cos(0.23 * static_cast<double>(j) + phase);
      }
      b.lambda[t] = 0.7 + 0.2 * envelope;
    }
    corpus.push_back(std::move(b));
  }
  return corpus;
}

}  // namespace beat::camn

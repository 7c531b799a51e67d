#include "beat/camn/synthesis.h"

#include "beat/errors.h"

#include <algorithm>

namespace beat::camn {

namespace {

std::vector<double> mlp_values(const std::vector<Camn::Dense>& mlp, std::vector<double> x) {
  for (std::size_t l = 0; l < mlp.size(); ++l) {
    const Tensor& w = mlp[l].weight->value;
    const Tensor& b = mlp[l].bias->value;
    Eigen::Map<const Eigen::RowVectorXd> in(x.data(), static_cast<Eigen::Index>(x.size()));
    Eigen::RowVectorXd out = in * w.matrix() + b.matrix().row(0);
    if (l + 1 < mlp.size()) out = out.unaryExpr([](double v) { return v > 0.0 ? v : 0.2 * v; });
    x.assign(out.data(), out.data() + out.size());
  }
  return x;
}

}  // namespace

GestureOutput synthesize(Camn& model, const ModalityBatch& modalities, const Tensor& seed_body,
                         const Tensor& seed_hands, std::size_t frames, const Ablation& ablation) {
  const CamnConfig& c = model.config();
  const std::size_t S = c.seed_length;
  if (frames < S) {
    throw DataMismatch("requested " + std::to_string(frames) + " frames, fewer than the " + std::to_string(S) +
                       "-frame seed");
  }
  if (seed_body.rank() != 2 || seed_body.rows() != S || seed_body.cols() != c.body_dim() ||
      seed_hands.rank() != 2 || seed_hands.rows() != S || seed_hands.cols() != c.hand_dim()) {
    throw DataMismatch("seed poses must be " + std::to_string(S) + " frames of body and hand channels");
  }
  if (modalities.frames() != frames) {
    throw DataMismatch("modalities cover " + std::to_string(modalities.frames()) + " frames, requested " +
                       std::to_string(frames));
  }

  Tape tape;
  const Encoded e = model.encode(tape, modalities, ablation);
  Var encoded = ndiff::concat({e.text, e.id, e.emotion, e.audio, e.face}, 1);
  const Tensor& enc = encoded.value();

  const std::size_t B = c.body_dim(), H = c.hand_dim(), E = c.encoded_dim();
  GestureOutput out{Tensor({frames, B}), Tensor({frames, H}), Tensor({frames, c.fused_dim()})};
  ndiff::LstmState body_state, hand_state;
  const auto& bl = model.body_lstm();
  const auto& hl = model.hand_lstm();
  std::vector<double> fused_row(c.fused_dim());
  std::vector<double> hand_in(c.fused_dim() + c.body_hidden);

  for (std::size_t t = 0; t < frames; ++t) {
    const std::size_t prev = t == 0 ? 0 : t - 1;
    std::copy_n(enc.data().begin() + static_cast<std::ptrdiff_t>(t * E), E, fused_row.begin());
    for (std::size_t j = 0; j < B; ++j) fused_row[E + j] = t == 0 ? seed_body.at(0, j) : out.body.at(prev, j);
    for (std::size_t j = 0; j < H; ++j) fused_row[E + B + j] = t == 0 ? seed_hands.at(0, j) : out.hands.at(prev, j);
    std::copy(fused_row.begin(), fused_row.end(), &out.fused.at(t, 0));

    ndiff::lstm_step(fused_row.data(), bl.wx->value, bl.wh->value, bl.bias->value, body_state);
    std::copy(fused_row.begin(), fused_row.end(), hand_in.begin());
    for (std::size_t j = 0; j < c.body_hidden; ++j) {
      hand_in[c.fused_dim() + j] = ablation.body_cascade ? 0.0 : body_state.h[j];
    }
    ndiff::lstm_step(hand_in.data(), hl.wx->value, hl.wh->value, hl.bias->value, hand_state);

    if (t < S) {
      for (std::size_t j = 0; j < B; ++j) out.body.at(t, j) = seed_body.at(t, j);
      for (std::size_t j = 0; j < H; ++j) out.hands.at(t, j) = seed_hands.at(t, j);
    } else {
      const auto body = mlp_values(model.body_head(), body_state.h);
      const auto hands = mlp_values(model.hand_head(), hand_state.h);
      std::copy(body.begin(), body.end(), &out.body.at(t, 0));
      std::copy(hands.begin(), hands.end(), &out.hands.at(t, 0));
    }
  }
  if (!out.body.all_finite() || !out.hands.all_finite()) throw NumericError("synthesis produced non-finite poses");
  return out;
}

}  // namespace beat::camn

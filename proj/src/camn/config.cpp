#include "beat/camn/config.h"

#include "beat/errors.h"

#include <nlohmann/json.hpp>

#include <set>

#include <stdexcept>

namespace beat::camn {

namespace {

#define BEAT_CAMN_FIELDS(X)                                                                                   \
  X(context) X(text_dim) X(id_dim) X(emotion_dim) X(audio_dim) X(face_dim) X(body_hidden) X(hand_hidden)     \
  X(speakers) X(emotions) X(word_dim) X(audio_samples) X(blendshapes) X(body_joints) X(hand_joints)          \
  X(seed_length) X(kernel) X(text_layers) X(emotion_layers) X(audio_layers) X(face_layers) X(disc_layers)    \
  X(disc_channels)

#define BEAT_CAMN_WEIGHTS(X) X(alpha) X(beta0) X(beta1) X(lr) X(disc_lr_scale)

}  // namespace

void CamnConfig::validate() const {
#define CHECK_POSITIVE(field) \
  if (field == 0) throw std::invalid_argument("camn config: " #field " must be positive");
  BEAT_CAMN_FIELDS(CHECK_POSITIVE)
#undef CHECK_POSITIVE
  if (kernel % 2 == 0 || kernel < 3) throw std::invalid_argument("camn config: kernel must be odd and >= 3");
  if (context % (kernel / 2) != 0) throw std::invalid_argument("camn config: context must divide by kernel/2");
  for (std::size_t layers : {text_layers, emotion_layers, audio_layers, face_layers}) {
    if (layers > context / (kernel / 2)) {
      throw std::invalid_argument("camn config: context too small for " + std::to_string(layers) + " layers");
    }
  }
  if (alpha < 0.0 || beta0 < 0.0 || beta1 < 0.0) throw std::invalid_argument("camn config: negative loss weight");
  if (!(lr > 0.0)) throw std::invalid_argument("camn config: lr must be positive");
  if (!(disc_lr_scale >= 0.0)) throw std::invalid_argument("camn config: disc_lr_scale must be non-negative");
}

CamnConfig CamnConfig::toy() {
  CamnConfig c;
  c.text_dim = 16;
  c.id_dim = 1;
  c.emotion_dim = 1;
  c.audio_dim = 16;
  c.face_dim = 4;
  c.body_hidden = 32;
  c.hand_hidden = 32;
  c.word_dim = 300 / 8;
  c.audio_samples = 800 / 8;
  c.disc_channels = 8;
  return c;
}

std::vector<std::size_t> dilation_schedule(std::size_t layers, std::size_t reach) {
  if (layers == 0) throw std::invalid_argument("dilation schedule needs at least one layer");
  if (reach < layers) throw std::invalid_argument("reach smaller than layer count");
  std::vector<std::size_t> out;
  std::size_t remaining = reach;
  std::size_t previous = 0;
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t left_after = layers - l - 1;
    std::size_t d;
    if (left_after == 0) {
      d = remaining;
    } else {
      d = previous == 0 ? 1 : previous * 2;
      if (d > remaining || remaining - d < left_after) d = 1;
    }
    out.push_back(d);
    remaining -= d;
    previous = d;
  }
  return out;
}

std::size_t receptive_reach(const std::vector<std::size_t>& dilations, std::size_t kernel) {
  std::size_t reach = 0;
  for (std::size_t d : dilations) reach += d * (kernel / 2);
  return reach;
}

std::string config_to_json(const CamnConfig& config) {
  nlohmann::ordered_json j;
#define WRITE_FIELD(field) j[#field] = config.field;
  BEAT_CAMN_FIELDS(WRITE_FIELD)
  BEAT_CAMN_WEIGHTS(WRITE_FIELD)
#undef WRITE_FIELD
  j["fused_dim"] = config.fused_dim();
  return j.dump(2);
}

CamnConfig config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("camn config: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("camn config: expected a JSON object");
  const std::set<std::string> known = {
#define NAME_FIELD(field) #field,
      BEAT_CAMN_FIELDS(NAME_FIELD) BEAT_CAMN_WEIGHTS(NAME_FIELD)
#undef NAME_FIELD
  };
  for (const auto& [key, value] : j.items())
    if (!known.count(key) && key != "fused_dim") throw ParseError("camn config: unknown key '" + key + "'");
  CamnConfig c;
  try {
#define READ_FIELD(field) \
  if (j.contains(#field)) c.field = j.at(#field).get<decltype(c.field)>();
    BEAT_CAMN_FIELDS(READ_FIELD)
    BEAT_CAMN_WEIGHTS(READ_FIELD)
#undef READ_FIELD
  } catch (const nlohmann::json::type_error& e) {
    throw ParseError(std::string("camn config: ") + e.what());
  }
  c.validate();
  // fused_dim is written for reference only; it must agree with the widths.
  if (j.contains("fused_dim") && j.at("fused_dim") != c.fused_dim())
    throw std::invalid_argument("camn config: fused_dim does not match the component widths");
  return c;
}

}  // namespace beat::camn

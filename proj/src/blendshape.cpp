#include "beat/blendshape.h"

#include "beat/errors.h"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

namespace beat {

const std::array<std::string, kBlendshapeCount>& blendshape_names() {
  static const std::array<std::string, kBlendshapeCount> names = {
      "eyeBlinkLeft",     "eyeLookDownLeft",  "eyeLookInLeft",     "eyeLookOutLeft",
      "eyeLookUpLeft",    "eyeSquintLeft",    "eyeWideLeft",       "eyeBlinkRight",
      "eyeLookDownRight", "eyeLookInRight",   "eyeLookOutRight",   "eyeLookUpRight",
      "eyeSquintRight",   "eyeWideRight",     "jawForward",        "jawLeft",
      "jawRight",         "jawOpen",          "mouthClose",        "mouthFunnel",
      "mouthPucker",      "mouthLeft",        "mouthRight",        "mouthSmileLeft",
      "mouthSmileRight",  "mouthFrownLeft",   "mouthFrownRight",   "mouthDimpleLeft",
      "mouthDimpleRight", "mouthStretchLeft", "mouthStretchRight", "mouthRollLower",
      "mouthRollUpper",   "mouthShrugLower",  "mouthShrugUpper",   "mouthPressLeft",
      "mouthPressRight",  "mouthLowerDownLeft", "mouthLowerDownRight", "mouthUpperUpLeft",
      "mouthUpperUpRight", "browDownLeft",    "browDownRight",     "browInnerUp",
      "browOuterUpLeft",  "browOuterUpRight", "cheekPuff",         "cheekSquintLeft",
      "cheekSquintRight", "noseSneerLeft",    "noseSneerRight",    "tongueOut",
  };
  return names;
}

namespace {

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

}  // namespace

BlendshapeParse parse_blendshapes(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), line_of(json_text, e.byte));
  }
  if (!doc.is_object() || !doc.contains("fps") || !doc["fps"].is_number()) {
    throw ParseError("blendshape document needs a numeric 'fps' field");
  }
  if (!doc.contains("channels") || !doc["channels"].is_object()) {
    throw ParseError("blendshape document needs a 'channels' object");
  }
  const double fps = doc["fps"].get<double>();
  if (!(fps > 0.0)) throw ParseError("fps must be positive");
  const auto& channels = doc["channels"];
  const auto& names = blendshape_names();
  for (const auto& [name, _] : channels.items()) {
    if (std::find(names.begin(), names.end(), name) == names.end()) {
      throw ParseError("unknown blendshape channel '" + name + "'");
    }
  }

  BlendshapeParse result;
  result.track.fps = fps;
  result.track.names.assign(names.begin(), names.end());
  std::optional<std::size_t> length;
  for (std::size_t c = 0; c < kBlendshapeCount; ++c) {
    if (!channels.contains(names[c])) throw ParseError("missing blendshape channel '" + names[c] + "'");
    const auto& values = channels[names[c]];
    if (!values.is_array()) throw ParseError("channel '" + names[c] + "' is not an array");
    if (!length) {
      length = values.size();
      result.track.weights.resize(static_cast<Eigen::Index>(*length),
                                  static_cast<Eigen::Index>(kBlendshapeCount));
    } else if (values.size() != *length) {
      throw ParseError("ragged blendshape arrays: '" + names[c] + "' has " +
                       std::to_string(values.size()) + " frames, expected " + std::to_string(*length));
    }
    for (std::size_t t = 0; t < values.size(); ++t) {
      if (!values[t].is_number()) throw ParseError("non-numeric weight in '" + names[c] + "'");
      double w = values[t].get<double>();
      if (!std::isfinite(w)) throw ParseError("non-finite weight in '" + names[c] + "'");
      if (w < 0.0 || w > 1.0) {
        w = std::clamp(w, 0.0, 1.0);
        ++result.clamped;
      }
      result.track.weights(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(c)) = w;
    }
  }
  return result;
}

std::string write_blendshapes(const BlendshapeTrack& track) {
  nlohmann::ordered_json doc;
  doc["fps"] = track.fps;
  nlohmann::ordered_json channels = nlohmann::ordered_json::object();
  for (std::size_t c = 0; c < track.names.size(); ++c) {
    std::vector<double> values(static_cast<std::size_t>(track.weights.rows()));
    for (Eigen::Index t = 0; t < track.weights.rows(); ++t) {
      values[static_cast<std::size_t>(t)] = track.weights(t, static_cast<Eigen::Index>(c));
    }
    channels[track.names[c]] = values;
  }
  doc["channels"] = channels;
  return doc.dump() + "\n";
}

}  // namespace beat

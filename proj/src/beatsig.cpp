#include "beat/beatsig.h"

#include "beat/bvh.h"
#include "beat/errors.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace beat {

Envelope rms_envelope(const AudioTrack& mono, double window, double hop) {
  if (mono.channel_count() != 1) throw DataMismatch("rms_envelope expects mono audio");
  if (!(hop > 0.0) || window < hop) throw std::invalid_argument("need window >= hop > 0");
  if (window * mono.sample_rate < 1.0) throw std::invalid_argument("window shorter than one sample");
  const auto& x = mono.channels.front();
  const std::size_t n = x.size();
  const auto width = static_cast<std::size_t>(std::llround(window * mono.sample_rate));

  Envelope env;
  env.hop = hop;
  for (std::size_t k = 0;; ++k) {
    const auto start = static_cast<std::size_t>(std::llround(static_cast<double>(k) * hop * mono.sample_rate));
    if (start >= n) break;
    const std::size_t end = std::min(n, start + width);
    double sum = 0.0;
    for (std::size_t i = start; i < end; ++i) sum += x[i] * x[i];
    env.values.push_back(std::sqrt(sum / static_cast<double>(end - start)));
  }
  return env;
}

BeatSequence audio_beats(const Envelope& envelope, double threshold) {
  if (!(threshold > 0.0) || threshold > 1.0) throw std::invalid_argument("threshold must be in (0,1]");
  const auto& e = envelope.values;
  if (e.empty()) throw DataMismatch("empty envelope");
  // Positive part of the first difference; delta[0] = 0.
  std::vector<double> delta(e.size(), 0.0);
  double peak = 0.0;
  for (std::size_t k = 1; k < e.size(); ++k) {
    delta[k] = std::max(0.0, e[k] - e[k - 1]);
    peak = std::max(peak, delta[k]);
  }
  BeatSequence beats;
  if (peak <= 0.0) return beats;
  for (std::size_t k = 1; k < e.size(); ++k) {
    const double d = delta[k];
    if (d <= 0.0 || d < threshold * peak) continue;
    const bool rises = d > delta[k - 1];
    const bool holds = k + 1 >= e.size() || d >= delta[k + 1];
    if (rises && holds) beats.times.push_back(static_cast<double>(k) * envelope.hop);
  }
  return beats;
}

std::vector<double> motion_velocity(const PositionTrack& track, const std::vector<std::size_t>& joints) {
  if (joints.empty()) throw std::invalid_argument("empty joint subset");
  const std::size_t T = track.frame_count();
  if (T < 2) throw DataMismatch("need at least 2 frames for velocity");
  for (std::size_t j : joints) {
    if (j >= track.joint_count()) throw DataMismatch("joint index out of range");
  }
  std::vector<double> speed(T, 0.0);
  for (std::size_t t = 1; t < T; ++t) {
    double sum = 0.0;
    for (std::size_t j : joints) sum += (track.at(t, j) - track.at(t - 1, j)).norm();
    speed[t] = sum / static_cast<double>(joints.size()) * track.fps;
  }
  speed[0] = speed[1];
  return speed;
}

BeatSequence motion_beats(const std::vector<double>& speed, double fps) {
  if (!(fps > 0.0)) throw std::invalid_argument("fps must be positive");
  BeatSequence beats;
  if (speed.size() < 3) return beats;
  for (std::size_t t = 1; t + 1 < speed.size(); ++t) {
    if (speed[t] < speed[t - 1] && speed[t] <= speed[t + 1]) {
      beats.times.push_back(static_cast<double>(t) / fps);
    }
  }
  return beats;
}

void validate_beats(const BeatSequence& beats) {
  for (std::size_t k = 0; k < beats.times.size(); ++k) {
    if (!std::isfinite(beats.times[k]) || beats.times[k] < 0.0) {
      throw DataMismatch("beat times must be finite and non-negative");
    }
    if (k > 0 && !(beats.times[k] > beats.times[k - 1])) {
      throw DataMismatch("beat times must be strictly increasing");
    }
  }
}

std::string beats_to_csv(const BeatSequence& beats) {
  std::ostringstream out;
  out << "t_seconds\n";
  for (double t : beats.times) out << format_number(t, 9) << '\n';
  return out.str();
}

BeatSequence parse_beats_csv(std::string_view text) {
  BeatSequence beats;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (number == 1 && line == "t_seconds") continue;
    double t = 0.0;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), t);
    if (ec != std::errc() || ptr != line.data() + line.size()) {
      throw ParseError("non-numeric beat time '" + line + "'", number);
    }
    beats.times.push_back(t);
  }
  try {
    validate_beats(beats);
  } catch (const DataMismatch& e) {
    throw ParseError(e.what());
  }
  return beats;
}

}  // namespace beat

#pragma once

// Audio beats (RMS onsets) and motion beats (local minima of joint speed).

#include "beat/motion.h"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace beat {

struct Envelope {
  double hop = 1.0 / 30.0;  // seconds
  std::vector<double> values;
};

struct BeatSequence {
  std::vector<double> times;  // strictly increasing, seconds
};

struct BeatParams {
  double window = 0.05;
  double hop = 1.0 / 30.0;
  double onset_threshold = 0.3;
};

// values[k] = sqrt(mean(x^2)) over samples in [k*hop, k*hop + window).
// Windows are emitted while their start lies inside the signal; the tail
// window may be shorter.
Envelope rms_envelope(const AudioTrack& mono, double window, double hop);

// Onset at hop k when delta[k] = e[k] - e[k-1] is positive, is a local
// maximum of the positive-delta sequence (strictly above the previous delta,
// not below the next), and reaches threshold * max(delta).
BeatSequence audio_beats(const Envelope& envelope, double threshold);

// speed[t] = mean over joints of |p[t] - p[t-1]| * fps; speed[0] = speed[1].
std::vector<double> motion_velocity(const PositionTrack& track, const std::vector<std::size_t>& joints);

// Frame t is a beat when speed[t] < speed[t-1] and speed[t] <= speed[t+1];
// a flat-bottomed minimum yields its first frame.
BeatSequence motion_beats(const std::vector<double>& speed, double fps);

// Throws beat::DataMismatch unless times are non-negative and strictly increasing.
void validate_beats(const BeatSequence& beats);

// One column, header t_seconds.
std::string beats_to_csv(const BeatSequence& beats);
BeatSequence parse_beats_csv(std::string_view text);

}  // namespace beat

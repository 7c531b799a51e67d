#pragma once

#include "beat/motion.h"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace beat {

// RIFF/WAVE with 16-bit integer PCM or 32-bit float samples (plain or
// WAVE_FORMAT_EXTENSIBLE). Samples are normalized to [-1, 1].
AudioTrack read_audio(std::span<const std::uint8_t> bytes);
AudioTrack read_audio_file(const std::filesystem::path& path);

enum class WavEncoding { Pcm16, Float32 };

std::vector<std::uint8_t> write_audio(const AudioTrack& track, WavEncoding encoding = WavEncoding::Pcm16);
void write_audio_file(const std::filesystem::path& path, const AudioTrack& track,
                      WavEncoding encoding = WavEncoding::Pcm16);

// Channel mean, then linear interpolation to target_rate. The output keeps
// floor(N * target / source) samples.
AudioTrack downmix_resample(const AudioTrack& track, double target_rate);

// Cuts mono audio into per-frame windows: row i holds samples_per_frame
// samples starting at round(i * rate / fps), zero padded past the end.
RowMatrix frame_audio(const AudioTrack& mono, double fps, std::size_t samples_per_frame,
                      std::size_t frames);

}  // namespace beat

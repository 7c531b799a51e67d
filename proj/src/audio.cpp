#include "beat/audio.h"

#include "beat/errors.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>

namespace beat {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) | (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t at, const char* tag) {
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>((v >> (8 * k)) & 0xFF));
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

}  // namespace

AudioTrack read_audio(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || !tag_is(bytes, 0, "RIFF") || !tag_is(bytes, 8, "WAVE")) {
    throw ParseError("not a RIFF/WAVE file");
  }
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  std::uint16_t bits = 0;
  bool have_fmt = false;
  std::span<const std::uint8_t> data;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t size = read_u32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (tag_is(bytes, pos, "fmt ")) {
      if (size < 16 || body + size > bytes.size()) throw ParseError("truncated fmt chunk");
      format = read_u16(bytes, body);
      channels = read_u16(bytes, body + 2);
      rate = read_u32(bytes, body + 4);
      bits = read_u16(bytes, body + 14);
      if (format == kFormatExtensible) {
        if (size < 40) throw ParseError("truncated extensible fmt chunk");
        format = read_u16(bytes, body + 24);
      }
      have_fmt = true;
    } else if (tag_is(bytes, pos, "data")) {
      if (body + size > bytes.size()) throw ParseError("truncated data chunk");
      data = bytes.subspan(body, size);
      have_data = true;
      break;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt) throw ParseError("missing fmt chunk");
  if (!have_data) throw ParseError("missing data chunk");
  if (channels < 1 || channels > 2) {
    throw ParseError("unsupported channel count " + std::to_string(channels));
  }
  if (rate == 0) throw ParseError("sample rate is zero");
  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool float32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !float32) {
    throw ParseError("unsupported codec (format " + std::to_string(format) + ", " +
                     std::to_string(bits) + " bits)");
  }
  const std::size_t frame_bytes = static_cast<std::size_t>(bits / 8) * channels;
  if (data.size() % frame_bytes != 0) throw ParseError("truncated sample data");
  const std::size_t n = data.size() / frame_bytes;

  AudioTrack track;
  track.sample_rate = rate;
  track.channels.assign(channels, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < channels; ++c) {
      const std::size_t at = i * frame_bytes + c * (bits / 8);
      double v = 0.0;
      if (pcm16) {
        v = static_cast<std::int16_t>(read_u16(data, at)) / 32768.0;
      } else {
        const std::uint32_t raw = read_u32(data, at);
        float f = 0.0f;
        std::memcpy(&f, &raw, sizeof f);
        v = std::clamp(static_cast<double>(f), -1.0, 1.0);
      }
      track.channels[c][i] = v;
    }
  }
  return track;
}

AudioTrack read_audio_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  return read_audio(bytes);
}

std::vector<std::uint8_t> write_audio(const AudioTrack& track, WavEncoding encoding) {
  const auto channels = static_cast<std::uint16_t>(track.channel_count());
  if (channels < 1 || channels > 2) throw DataMismatch("audio must have 1 or 2 channels");
  for (const auto& ch : track.channels) {
    if (ch.size() != track.sample_count()) throw DataMismatch("audio channels differ in length");
  }
  const std::uint16_t bits = encoding == WavEncoding::Pcm16 ? 16 : 32;
  const std::uint32_t rate = static_cast<std::uint32_t>(std::lround(track.sample_rate));
  const std::uint32_t data_size =
      static_cast<std::uint32_t>(track.sample_count() * channels * (bits / 8));

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_size);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, encoding == WavEncoding::Pcm16 ? kFormatPcm : kFormatFloat);
  put_u16(out, channels);
  put_u32(out, rate);
  put_u32(out, rate * channels * (bits / 8));
  put_u16(out, static_cast<std::uint16_t>(channels * (bits / 8)));
  put_u16(out, bits);
  put_tag(out, "data");
  put_u32(out, data_size);
  for (std::size_t i = 0; i < track.sample_count(); ++i) {
    for (std::size_t c = 0; c < channels; ++c) {
      const double v = std::clamp(track.channels[c][i], -1.0, 1.0);
      if (encoding == WavEncoding::Pcm16) {
        const long q = std::clamp(std::lround(v * 32768.0), -32768L, 32767L);
        put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
      } else {
        const float f = static_cast<float>(v);
        std::uint32_t raw = 0;
        std::memcpy(&raw, &f, sizeof raw);
        put_u32(out, raw);
      }
    }
  }
  return out;
}

void write_audio_file(const std::filesystem::path& path, const AudioTrack& track, WavEncoding encoding) {
  const auto bytes = write_audio(track, encoding);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

AudioTrack downmix_resample(const AudioTrack& track, double target_rate) {
  if (!(target_rate > 0.0)) throw std::invalid_argument("target rate must be positive");
  const std::size_t n = track.sample_count();
  std::vector<double> mono(n, 0.0);
  for (const auto& ch : track.channels) {
    if (ch.size() != n) throw DataMismatch("audio channels differ in length");
    for (std::size_t i = 0; i < n; ++i) mono[i] += ch[i];
  }
  if (!track.channels.empty()) {
    for (double& v : mono) v /= static_cast<double>(track.channels.size());
  }

  AudioTrack out;
  out.sample_rate = target_rate;
  if (target_rate == track.sample_rate || n == 0) {
    out.channels.push_back(std::move(mono));
    return out;
  }
  const double step = track.sample_rate / target_rate;
  const auto m = static_cast<std::size_t>(std::floor(static_cast<double>(n) / step + 1e-9));
  std::vector<double> resampled(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double position = static_cast<double>(i) * step;
    const auto lo = std::min(static_cast<std::size_t>(position), n - 1);
    const std::size_t hi = std::min(lo + 1, n - 1);
    const double w = position - static_cast<double>(lo);
    resampled[i] = (1.0 - w) * mono[lo] + w * mono[hi];
  }
  out.channels.push_back(std::move(resampled));
  return out;
}

RowMatrix frame_audio(const AudioTrack& mono, double fps, std::size_t samples_per_frame,
                      std::size_t frames) {
  if (mono.channel_count() != 1) throw DataMismatch("frame_audio expects mono audio");
  if (!(fps > 0.0) || samples_per_frame == 0) throw std::invalid_argument("bad framing parameters");
  const auto& x = mono.channels.front();
  RowMatrix out = RowMatrix::Zero(static_cast<Eigen::Index>(frames),
                                  static_cast<Eigen::Index>(samples_per_frame));
  for (std::size_t i = 0; i < frames; ++i) {
    const auto start = static_cast<std::size_t>(std::llround(static_cast<double>(i) * mono.sample_rate / fps));
    for (std::size_t s = 0; s < samples_per_frame && start + s < x.size(); ++s) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(s)) = x[start + s];
    }
  }
  return out;
}

}  // namespace beat

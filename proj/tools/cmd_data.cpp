#include "commands.h"
#include "common.h"

#include "beat/audio.h"
#include "beat/beatsig.h"
#include "beat/blendshape.h"
#include "beat/bvh.h"
#include "beat/csv.h"
#include "beat/kinematics.h"
#include "beat/resample.h"
#include "beat/skeleton.h"
#include "beat/textgrid.h"

#include <cmath>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

namespace beat::cli {

namespace fs = std::filesystem;

PositionTrack select_positions(const PositionTrack& track, const std::vector<std::size_t>& joints) {
  PositionTrack out;
  out.fps = track.fps;
  out.positions.resize(track.positions.rows(), static_cast<Eigen::Index>(3 * joints.size()));
  for (std::size_t k = 0; k < joints.size(); ++k) {
    out.joint_names.push_back(track.joint_names.at(joints[k]));
    out.positions.middleCols(static_cast<Eigen::Index>(3 * k), 3) =
        track.positions.middleCols(static_cast<Eigen::Index>(3 * joints[k]), 3);
  }
  return out;
}

namespace {

struct ConvertOptions {
  std::vector<std::string> inputs;
  std::string output;
  std::optional<double> fps;
  std::optional<double> rate;
  bool fk = false;
  bool float_wav = false;
  std::string order;
};

std::size_t transcript_frames(const AlignedTranscript& t, double fps) {
  return t.entries.empty() ? 0 : static_cast<std::size_t>(std::ceil(t.entries.back().end * fps - 1e-9));
}

std::string convert_one(const ConvertOptions& o, const fs::path& in, const fs::path& out) {
  const std::string ext = lower_extension(in);
  const std::string out_ext = lower_extension(out);
  std::ostringstream summary;
  summary << in.string() << " -> " << out.string() << ": ";

  if (ext == ".bvh") {
    MotionClip clip = with_file(in, [&] { return read_bvh_file(in); });
    if (o.fps) clip = resample(clip, *o.fps);
    if (o.fk || out_ext == ".csv") {
      std::optional<RotationOrder> order;
      if (!o.order.empty()) order = RotationOrder::parse(o.order);
      const PositionTrack track = forward_kinematics(clip, order);
      write_text_file(out, positions_to_csv(track));
      summary << track.frame_count() << " frames, " << track.joint_count() << " joint positions at "
              << format_number(track.fps, 6) << " fps";
    } else {
      write_bvh_file(out, clip);
      summary << clip.frame_count() << " frames, " << clip.channel_count() << " channels at "
              << format_number(clip.fps, 6) << " fps";
    }
  } else if (ext == ".json") {
    BlendshapeParse parsed = with_file(in, [&] { return parse_blendshapes(read_text_file(in)); });
    BlendshapeTrack track = o.fps ? resample(parsed.track, *o.fps) : parsed.track;
    write_text_file(out, write_blendshapes(track));
    summary << track.frame_count() << " frames, " << kBlendshapeCount << " blendshapes at "
            << format_number(track.fps, 6) << " fps, " << parsed.clamped << " weights clamped";
  } else if (ext == ".wav") {
    AudioTrack audio = with_file(in, [&] { return read_audio_file(in); });
    if (o.rate) audio = downmix_resample(audio, *o.rate);
    write_audio_file(out, audio, o.float_wav ? WavEncoding::Float32 : WavEncoding::Pcm16);
    summary << audio.sample_count() << " samples, " << audio.channel_count() << " channel(s) at "
            << format_number(audio.sample_rate, 6) << " Hz";
  } else if (ext == ".textgrid") {
    const AlignedTranscript transcript = with_file(in, [&] { return parse_textgrid(read_text_file(in)); });
    if (out_ext == ".csv") {
      const double fps = o.fps.value_or(30.0);
      const auto words = frame_words(transcript, fps, transcript_frames(transcript, fps));
      std::ostringstream csv;
      csv << "frame,word\n";
      for (std::size_t i = 0; i < words.size(); ++i) csv << i << ',' << words[i] << '\n';
      write_text_file(out, csv.str());
      summary << words.size() << " frames at " << format_number(fps, 6) << " fps";
    } else {
      write_text_file(out, write_textgrid(transcript));
      summary << transcript.entries.size() << " intervals";
    }
  } else {
    throw std::invalid_argument("unrecognised input format '" + ext + "'");
  }
  return summary.str();
}

}  // namespace

void register_convert(CLI::App& app, Action& action) {
  auto o = std::make_shared<ConvertOptions>();
  auto* cmd = app.add_subcommand("convert", "Convert or resample BVH, blendshape JSON, WAV and TextGrid files");
  cmd->add_option("--in", o->inputs, "Input file(s)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", o->output, "Output file, or directory when several inputs are given")->required();
  cmd->add_option("--fps", o->fps, "Target frame rate (motion, blendshapes, TextGrid framing)");
  cmd->add_option("--rate", o->rate, "Target sample rate for WAV (downmixes to mono)");
  cmd->add_flag("--fk", o->fk, "Write forward-kinematics joint positions as CSV");
  cmd->add_option("--order", o->order, "Override Euler rotation order for FK, e.g. ZXY");
  cmd->add_flag("--float", o->float_wav, "Write 32-bit float WAV instead of 16-bit PCM");
  cmd->callback([o, &action] {
    action = [o] {
      if (o->inputs.size() == 1) {
        std::cout << convert_one(*o, o->inputs.front(), o->output) << '\n';
        return 0;
      }
      fs::create_directories(o->output);
      for (const auto& in : o->inputs) {
        fs::path target = fs::path(o->output) / fs::path(in).filename();
        if (o->fk) target.replace_extension(".csv");
        std::cout << convert_one(*o, in, target) << '\n';
      }
      return 0;
    };
  });
}

namespace {

struct BeatsOptions {
  std::string audio;
  std::string bvh;
  std::string output;
  std::string joints = "body";
  BeatParams params;
};

}  // namespace

void register_beats(CLI::App& app, Action& action) {
  auto o = std::make_shared<BeatsOptions>();
  auto* cmd = app.add_subcommand("beats", "Extract audio onset beats or motion velocity-minimum beats");
  auto* audio = cmd->add_option("--audio", o->audio, "WAV file")->check(CLI::ExistingFile);
  auto* bvh = cmd->add_option("--bvh", o->bvh, "BVH motion file")->check(CLI::ExistingFile);
  audio->excludes(bvh);
  cmd->add_option("--out", o->output, "Beat CSV (column t_seconds); stdout when omitted");
  cmd->add_option("--window", o->params.window, "RMS window in seconds")->capture_default_str();
  cmd->add_option("--hop", o->params.hop, "Envelope hop in seconds")->capture_default_str();
  cmd->add_option("--onset-threshold", o->params.onset_threshold, "Fraction of the largest envelope rise")
      ->capture_default_str();
  cmd->add_option("--joints", o->joints, "Joint subset for motion beats")
      ->check(CLI::IsMember({"body", "hands", "all"}))
      ->capture_default_str();
  cmd->callback([o, &action] {
    action = [o] {
      if (o->audio.empty() && o->bvh.empty()) throw std::invalid_argument("beats needs --audio or --bvh");
      BeatSequence beats;
      Json params;
      if (!o->audio.empty()) {
        const AudioTrack audio = with_file(o->audio, [&] { return read_audio_file(o->audio); });
        const AudioTrack mono = downmix_resample(audio, audio.sample_rate);
        beats = audio_beats(rms_envelope(mono, o->params.window, o->params.hop), o->params.onset_threshold);
        params["source"] = "audio";
        params["window"] = report_number(o->params.window);
        params["hop"] = report_number(o->params.hop);
        params["onset_threshold"] = report_number(o->params.onset_threshold);
      } else {
        const MotionClip clip = with_file(o->bvh, [&] { return read_bvh_file(o->bvh); });
        const auto joints = select_joints(clip.skeleton, parse_joint_selection(o->joints));
        beats = motion_beats(motion_velocity(forward_kinematics(clip), joints), clip.fps);
        params["source"] = "motion";
        params["joints"] = o->joints;
        params["fps"] = report_number(clip.fps);
      }
      if (o->output.empty()) {
        std::cout << beats_to_csv(beats);
      } else {
        write_text_file(o->output, beats_to_csv(beats));
        Json doc;
        doc["beats"] = beats.times.size();
        doc["params"] = params;
        doc["out"] = o->output;
        emit(doc);
      }
      return 0;
    };
  });
}

}  // namespace beat::cli

#include "commands.h"
#include "common.h"

#include "beat/audio.h"
#include "beat/blendshape.h"
#include "beat/bvh.h"
#include "beat/camn/embeddings.h"
#include "beat/camn/gradcheck.h"
#include "beat/camn/synthesis.h"
#include "beat/camn/toy_corpus.h"
#include "beat/camn/trainer.h"
#include "beat/ndiff/checkpoint.h"
#include "beat/resample.h"
#include "beat/skeleton.h"
#include "beat/textgrid.h"

#include <chrono>
#include <ctime>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

namespace beat::cli {

namespace fs = std::filesystem;
using namespace beat::camn;

namespace {

struct ModelOptions {
  bool toy = false;
  std::string config_path;
  std::string model_dir;
  std::uint64_t seed = 1;
};

void add_model_options(CLI::App* cmd, ModelOptions& o) {
  cmd->add_flag("--toy", o.toy, "Use the reduced toy dimensions");
  cmd->add_option("--camn-config", o.config_path, "CaMN config JSON")->check(CLI::ExistingFile);
  cmd->add_option("--model", o.model_dir, "Directory written by 'camn train'")->check(CLI::ExistingDirectory);
  cmd->add_option("--seed", o.seed, "Initialisation seed")->capture_default_str();
}

CamnConfig resolve_config(const ModelOptions& o) {
  if (!o.model_dir.empty()) {
    const fs::path p = fs::path(o.model_dir) / "config.json";
    return with_file(p, [&] { return config_from_json(read_text_file(p)); });
  }
  if (!o.config_path.empty()) return with_file(o.config_path, [&] { return config_from_json(read_text_file(o.config_path)); });
  return o.toy ? CamnConfig::toy() : CamnConfig{};
}

std::unique_ptr<Camn> build_model(const ModelOptions& o) {
  const CamnConfig config = resolve_config(o);
  auto model = std::make_unique<Camn>(config, o.seed);
  if (!o.model_dir.empty()) {
    const fs::path p = fs::path(o.model_dir) / "checkpoint.json";
    with_file(p, [&] { return ndiff::load_checkpoint(p, model->generator()); });
    const fs::path d = fs::path(o.model_dir) / "discriminator.json";
    if (fs::exists(d)) with_file(d, [&] { return ndiff::load_checkpoint(d, model->discriminator()); });
  }
  return model;
}

Json config_json(const CamnConfig& c) { return Json::parse(config_to_json(c)); }

Ablation parse_drops(const std::vector<std::string>& drops) {
  Ablation a;
  for (const auto& d : drops) a.drop(d);
  return a;
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buffer;
}

struct CorpusOptions {
  std::size_t sequences = 10;
  std::size_t frames = 64;
  std::uint64_t data_seed = 7;
};

void add_corpus_options(CLI::App* cmd, CorpusOptions& o) {
  cmd->add_option("--sequences", o.sequences, "Synthetic sequences")->capture_default_str();
  cmd->add_option("--frames", o.frames, "Frames per sequence")->capture_default_str();
  cmd->add_option("--data-seed", o.data_seed, "Synthetic corpus seed")->capture_default_str();
}

struct TrainOptionsCli {
  ModelOptions model;
  CorpusOptions corpus;
  std::size_t steps = 500;
  std::string out;
  std::vector<std::string> drops;
};

int run_train(const TrainOptionsCli& o) {
  auto model = build_model(o.model);
  const auto corpus = toy_corpus(model->config(), o.corpus.sequences, o.corpus.frames, o.corpus.data_seed);
  TrainOptions options;
  options.ablation = parse_drops(o.drops);
  Trainer trainer(*model, options);

  std::ostringstream curve;
  curve << "step,generator,reconstruction,adversarial,discriminator\n";
  Json losses = Json::array();
  double first = 0.0, last = 0.0;
  for (std::size_t s = 0; s < o.steps; ++s) {
    const StepLosses l = trainer.step(corpus);
    if (s == 0) first = l.generator;
    last = l.generator;
    curve << s + 1 << ',' << format_number(l.generator, 6) << ',' << format_number(l.reconstruction, 6) << ','
          << format_number(l.adversarial, 6) << ',' << format_number(l.discriminator, 6) << '\n';
    losses.push_back(report_number(l.generator));
  }

  Json summary;
  summary["steps"] = o.steps;
  summary["initial_loss"] = report_number(first);
  summary["final_loss"] = report_number(last);
  summary["ratio"] = report_number(first != 0.0 ? last / first : 0.0);
  summary["ablation"] = options.ablation.describe();
  summary["seed"] = o.model.seed;

  if (!o.out.empty()) {
    const fs::path dir(o.out);
    fs::create_directories(dir);
    write_text_file(dir / "losses.csv", curve.str());
    write_text_file(dir / "config.json", config_to_json(model->config()) + "\n");
    ndiff::save_checkpoint(dir / "checkpoint.json", model->generator(), o.model.seed);
    ndiff::save_checkpoint(dir / "discriminator.json", model->discriminator(), o.model.seed);
    Json manifest;
    manifest["config"] = config_json(model->config());
    manifest["seed"] = o.model.seed;
    manifest["data_seed"] = o.corpus.data_seed;
    manifest["sequences"] = o.corpus.sequences;
    manifest["frames"] = o.corpus.frames;
    manifest["ablation"] = options.ablation.describe();
    manifest["losses"] = losses;
    manifest["created"] = timestamp();
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
    summary["out"] = o.out;
  }
  emit(summary);
  return 0;
}

struct ForwardOptions {
  ModelOptions model;
  CorpusOptions corpus;
  std::vector<std::string> drops;
};

int run_forward(const ForwardOptions& o) {
  auto model = build_model(o.model);
  const auto corpus = toy_corpus(model->config(), 1, o.corpus.frames, o.corpus.data_seed);
  const Ablation ablation = parse_drops(o.drops);
  Tape tape;
  const Decoded d = model->forward(tape, corpus.front(), ablation);
  const StepLosses l = evaluate_losses(*model, corpus, ablation);
  Json doc;
  doc["frames"] = o.corpus.frames;
  doc["body_shape"] = d.body.shape();
  doc["hands_shape"] = d.hands.shape();
  doc["fused_dim"] = model->config().fused_dim();
  doc["generator_loss"] = report_number(l.generator);
  doc["reconstruction"] = report_number(l.reconstruction);
  doc["adversarial"] = report_number(l.adversarial);
  doc["ablation"] = ablation.describe();
  emit(doc);
  return 0;
}

struct SynthOptions {
  ModelOptions model;
  std::string seed_pose;
  std::string out;
  std::size_t length = 0;
  std::string audio, textgrid, blendshapes, embeddings;
  std::size_t speaker = 0;
  std::size_t emotion = 0;
  std::vector<std::string> drops;
};

ModalityBatch synthesis_inputs(const SynthOptions& o, const CamnConfig& c, double fps) {
  const std::size_t T = o.length;
  ModalityBatch b;
  b.speaker = o.speaker;
  b.emotions.assign(T, o.emotion);
  b.words = Tensor({T, c.word_dim});
  b.audio = Tensor({T, c.audio_samples});
  b.face = Tensor({T, c.blendshapes});

  if (!o.textgrid.empty()) {
    const auto transcript = with_file(o.textgrid, [&] { return parse_textgrid(read_text_file(o.textgrid)); });
    const auto words = frame_words(transcript, fps, T);
    WordTable table = [&] {
      if (!o.embeddings.empty()) return with_file(o.embeddings, [&] { return WordTable::load_vec(o.embeddings); });
      std::set<std::string> vocab(words.begin(), words.end());
      return WordTable::random({vocab.begin(), vocab.end()}, c.word_dim, o.model.seed);
    }();
    if (table.dim() != c.word_dim) {
      throw DataMismatch("embeddings have " + std::to_string(table.dim()) + " dimensions, model expects " +
                         std::to_string(c.word_dim));
    }
    b.words = table.embed(words);
  }
  if (!o.audio.empty()) {
    const AudioTrack audio = with_file(o.audio, [&] { return read_audio_file(o.audio); });
    const AudioTrack mono = downmix_resample(audio, fps * static_cast<double>(c.audio_samples));
    const RowMatrix framed = frame_audio(mono, fps, c.audio_samples, T);
    std::copy(framed.data(), framed.data() + framed.size(), b.audio.data().begin());
  }
  if (!o.blendshapes.empty()) {
    const BlendshapeParse parsed = with_file(o.blendshapes, [&] { return parse_blendshapes(read_text_file(o.blendshapes)); });
    const BlendshapeTrack track = resample(parsed.track, fps);
    if (c.blendshapes != kBlendshapeCount) throw DataMismatch("model expects a different blendshape count");
    for (std::size_t t = 0; t < T && t < track.frame_count(); ++t) {
      for (std::size_t k = 0; k < kBlendshapeCount; ++k) {
        b.face.at(t, k) = track.weights(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k));
      }
    }
  }
  return b;
}

int run_synthesize(const SynthOptions& o) {
  auto model = build_model(o.model);
  const CamnConfig& c = model->config();
  const MotionClip seed_clip = with_file(o.seed_pose, [&] { return read_bvh_file(o.seed_pose); });
  const JointPartition parts = partition_joints(seed_clip.skeleton);
  if (parts.body.size() != c.body_joints || parts.hands.size() != c.hand_joints) {
    throw DataMismatch("seed skeleton has " + std::to_string(parts.body.size()) + " body and " +
                       std::to_string(parts.hands.size()) + " hand joints, model expects " +
                       std::to_string(c.body_joints) + " and " + std::to_string(c.hand_joints));
  }
  if (seed_clip.frame_count() < c.seed_length) {
    throw DataMismatch("seed clip has " + std::to_string(seed_clip.frame_count()) + " frames, needs " +
                       std::to_string(c.seed_length));
  }
  const RowMatrix body_rot = gather_rotations(seed_clip, parts.body);
  const RowMatrix hand_rot = gather_rotations(seed_clip, parts.hands);
  Tensor seed_body({c.seed_length, c.body_dim()});
  Tensor seed_hands({c.seed_length, c.hand_dim()});
  for (std::size_t t = 0; t < c.seed_length; ++t) {
    for (std::size_t j = 0; j < c.body_dim(); ++j) seed_body.at(t, j) = body_rot(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j));
    for (std::size_t j = 0; j < c.hand_dim(); ++j) seed_hands.at(t, j) = hand_rot(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j));
  }

  const ModalityBatch inputs = synthesis_inputs(o, c, seed_clip.fps);
  const GestureOutput g = synthesize(*model, inputs, seed_body, seed_hands, o.length, parse_drops(o.drops));

  MotionClip out;
  out.skeleton = seed_clip.skeleton;
  out.fps = seed_clip.fps;
  out.frames.resize(static_cast<Eigen::Index>(o.length), seed_clip.frames.cols());
  for (std::size_t t = 0; t < o.length; ++t) {
    out.frames.row(static_cast<Eigen::Index>(t)) =
        seed_clip.frames.row(static_cast<Eigen::Index>(std::min(t, c.seed_length - 1)));
  }
  RowMatrix body(static_cast<Eigen::Index>(o.length), static_cast<Eigen::Index>(c.body_dim()));
  RowMatrix hands(static_cast<Eigen::Index>(o.length), static_cast<Eigen::Index>(c.hand_dim()));
  std::copy(g.body.data().begin(), g.body.data().end(), body.data());
  std::copy(g.hands.data().begin(), g.hands.data().end(), hands.data());
  // Seed frames are copied from the clip itself so they round-trip exactly.
  RowMatrix body_tail = body.bottomRows(static_cast<Eigen::Index>(o.length - c.seed_length));
  RowMatrix hand_tail = hands.bottomRows(static_cast<Eigen::Index>(o.length - c.seed_length));
  MotionClip tail;
  tail.skeleton = out.skeleton;
  tail.fps = out.fps;
  tail.frames = out.frames.bottomRows(static_cast<Eigen::Index>(o.length - c.seed_length));
  scatter_rotations(tail, parts.body, body_tail);
  scatter_rotations(tail, parts.hands, hand_tail);
  out.frames.bottomRows(static_cast<Eigen::Index>(o.length - c.seed_length)) = tail.frames;

  write_bvh_file(o.out, out);
  std::cout << o.out << ": " << o.length << " frames at " << format_number(out.fps, 6) << " fps, first "
            << c.seed_length << " from " << o.seed_pose << '\n';
  return 0;
}

struct AblateOptions {
  ModelOptions model;
  CorpusOptions corpus;
  std::vector<std::string> drops;
  std::size_t steps = 0;
};

int run_ablate(const AblateOptions& o) {
  auto model = build_model(o.model);
  const auto corpus = toy_corpus(model->config(), o.corpus.sequences, o.corpus.frames, o.corpus.data_seed);
  const Ablation ablation = parse_drops(o.drops);
  if (o.steps > 0) {
    Trainer trainer(*model);
    for (std::size_t s = 0; s < o.steps; ++s) trainer.step(corpus);
  }
  const StepLosses full = evaluate_losses(*model, corpus);
  const StepLosses dropped = evaluate_losses(*model, corpus, ablation);
  double change = 0.0;
  std::size_t count = 0;
  for (const auto& seq : corpus) {
    Tape tape;
    const Decoded a = model->forward(tape, seq);
    const Decoded b = model->forward(tape, seq, ablation);
    for (std::size_t i = 0; i < a.body.value().size(); ++i) change += std::abs(a.body.value()[i] - b.body.value()[i]);
    for (std::size_t i = 0; i < a.hands.value().size(); ++i) change += std::abs(a.hands.value()[i] - b.hands.value()[i]);
    count += a.body.value().size() + a.hands.value().size();
  }
  Json doc;
  doc["ablation"] = ablation.describe();
  doc["steps"] = o.steps;
  doc["full_loss"] = report_number(full.generator);
  doc["ablated_loss"] = report_number(dropped.generator);
  doc["mean_output_change"] = report_number(change / static_cast<double>(count));
  emit(doc);
  return 0;
}

struct GradcheckOptions {
  ModelOptions model;
  std::size_t frames = 16;
  std::size_t samples = 100;
  double eps = 1e-4;
  double threshold = 1e-3;
  std::uint64_t data_seed = 7;
};

int run_gradcheck(const GradcheckOptions& o) {
  auto model = build_model(o.model);
  const auto corpus = toy_corpus(model->config(), 1, o.frames, o.data_seed);
  const GradcheckReport r = gradcheck_generator(*model, corpus, o.samples, o.eps, o.model.seed);
  Json doc;
  doc["max_rel_error"] = report_number(r.max_rel_error);
  doc["samples"] = r.entries.size();
  doc["below_floor"] = r.below_floor;
  doc["eps"] = o.eps;
  doc["threshold"] = o.threshold;
  doc["frames"] = o.frames;
  doc["pass"] = r.max_rel_error < o.threshold;
  emit(doc);
  return r.max_rel_error < o.threshold ? kOk : kNumericError;
}

}  // namespace

void register_camn(CLI::App& app, Action& action) {
  auto* camn = app.add_subcommand("camn", "Train, run and check the cascaded motion network");
  camn->require_subcommand(1);

  auto t = std::make_shared<TrainOptionsCli>();
  auto* train = camn->add_subcommand("train", "Train on the synthetic corpus");
  add_model_options(train, t->model);
  add_corpus_options(train, t->corpus);
  train->add_option("--steps", t->steps, "Adam steps")->capture_default_str();
  train->add_option("--out", t->out, "Output directory for losses, checkpoint and manifest");
  train->add_option("--drop", t->drops, "Ablate text|audio|face|emotion|id|semantic");
  train->callback([t, &action] { action = [t] { return run_train(*t); }; });

  auto f = std::make_shared<ForwardOptions>();
  auto* forward = camn->add_subcommand("forward", "Teacher-forced forward pass on one synthetic sequence");
  add_model_options(forward, f->model);
  add_corpus_options(forward, f->corpus);
  forward->add_option("--drop", f->drops, "Ablate text|audio|face|emotion|id|semantic");
  forward->callback([f, &action] { action = [f] { return run_forward(*f); }; });

  auto s = std::make_shared<SynthOptions>();
  auto* synth = camn->add_subcommand("synthesize", "Autoregressive rollout from a seed pose");
  add_model_options(synth, s->model);
  synth->add_option("--seed-pose", s->seed_pose, "BVH whose first frames seed the rollout")
      ->required()
      ->check(CLI::ExistingFile);
  synth->add_option("--len", s->length, "Output frames")->required();
  synth->add_option("--out", s->out, "Output BVH")->required();
  synth->add_option("--audio", s->audio, "Speech WAV")->check(CLI::ExistingFile);
  synth->add_option("--textgrid", s->textgrid, "Word alignment")->check(CLI::ExistingFile);
  synth->add_option("--blendshapes", s->blendshapes, "Facial blendshape JSON")->check(CLI::ExistingFile);
  synth->add_option("--embeddings", s->embeddings, "Word vectors in .vec text format")->check(CLI::ExistingFile);
  synth->add_option("--speaker", s->speaker, "Speaker id")->capture_default_str();
  synth->add_option("--emotion", s->emotion, "Emotion id")->capture_default_str();
  synth->add_option("--drop", s->drops, "Ablate text|audio|face|emotion|id");
  synth->callback([s, &action] { action = [s] { return run_synthesize(*s); }; });

  auto a = std::make_shared<AblateOptions>();
  auto* ablate = camn->add_subcommand("ablate", "Compare losses and outputs with modalities removed");
  add_model_options(ablate, a->model);
  add_corpus_options(ablate, a->corpus);
  ablate->add_option("--drop", a->drops, "Ablate text|audio|face|emotion|id|semantic")->required();
  ablate->add_option("--steps", a->steps, "Training steps before comparing")->capture_default_str();
  ablate->callback([a, &action] { action = [a] { return run_ablate(*a); }; });

  auto g = std::make_shared<GradcheckOptions>();
  auto* grad = camn->add_subcommand("gradcheck", "Finite-difference check of the generator loss gradient");
  add_model_options(grad, g->model);
  grad->add_option("--frames", g->frames, "Sequence length")->capture_default_str();
  grad->add_option("--samples", g->samples, "Parameters to sample")->capture_default_str();
  grad->add_option("--eps", g->eps, "Central-difference step")->capture_default_str();
  grad->add_option("--threshold", g->threshold, "Maximum relative error")->capture_default_str();
  grad->callback([g, &action] { action = [g] { return run_gradcheck(*g); }; });
}

}  // namespace beat::cli

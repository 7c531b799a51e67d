#include "commands.h"
#include "common.h"

#include "beat/beatsig.h"
#include "beat/bvh.h"
#include "beat/csv.h"
#include "beat/features.h"
#include "beat/kinematics.h"
#include "beat/metrics.h"
#include "beat/skeleton.h"

#include <memory>

namespace beat::cli {

namespace {

PositionTrack load_positions(const std::string& path, const std::string& joints) {
  const MotionClip clip = with_file(path, [&] { return read_bvh_file(path); });
  const PositionTrack track = forward_kinematics(clip);
  if (joints == "all") return track;
  return select_positions(track, select_joints(clip.skeleton, parse_joint_selection(joints)));
}

Eigen::MatrixXd load_matrix(const std::string& path) {
  return with_file(path, [&] { return parse_matrix_csv(read_text_file(path)); });
}

struct SrgrOptions {
  std::vector<std::string> truth, pred, scores;
  double delta = kDefaultPckDelta;
  std::string joints = "all";
};

struct FgdOptions {
  std::string real, gen;
  std::vector<std::string> real_bvh, gen_bvh;
  std::size_t window = 34;
  std::size_t stride = 10;
  std::size_t dims = 32;
  std::string joints = "all";
};

struct BeatAlignOptions {
  std::string gesture, audio;
  double sigma = kDefaultBeatSigma;
};

struct L1Options {
  std::vector<std::string> bvh;
  std::string features;
  std::string joints = "all";
};

}  // namespace

void register_eval(CLI::App& app, Action& action) {
  auto* eval = app.add_subcommand("eval", "Evaluate SRGR, FGD, BeatAlign or L1 diversity");
  eval->require_subcommand(1);

  auto s = std::make_shared<SrgrOptions>();
  auto* srgr_cmd = eval->add_subcommand("srgr", "Semantic-relevant gesture recall");
  srgr_cmd->add_option("--truth", s->truth, "Ground-truth BVH clips")->required()->check(CLI::ExistingFile);
  srgr_cmd->add_option("--pred", s->pred, "Predicted BVH clips, same order")->required()->check(CLI::ExistingFile);
  srgr_cmd->add_option("--scores", s->scores, "Per-frame semantic score CSVs, same order")
      ->required()
      ->check(CLI::ExistingFile);
  srgr_cmd->add_option("--delta", s->delta, "PCK threshold in centimeters")->capture_default_str();
  srgr_cmd->add_option("--joints", s->joints, "Joint subset")
      ->check(CLI::IsMember({"body", "hands", "all"}))
      ->capture_default_str();
  srgr_cmd->callback([s, &action] {
    action = [s] {
      if (s->truth.size() != s->pred.size() || s->truth.size() != s->scores.size()) {
        throw DataMismatch("srgr needs equally many --truth, --pred and --scores files");
      }
      std::vector<ClipPair> clips;
      for (std::size_t i = 0; i < s->truth.size(); ++i) {
        ClipPair c;
        c.truth = load_positions(s->truth[i], s->joints);
        c.pred = load_positions(s->pred[i], s->joints);
        c.weights = with_file(s->scores[i], [&] { return parse_score_csv(read_text_file(s->scores[i]), c.truth.fps); });
        clips.push_back(std::move(c));
      }
      Json params;
      params["delta"] = report_number(s->delta);
      params["joints"] = s->joints;
      emit(report("srgr", srgr(clips, s->delta), params, clips.size()));
      return 0;
    };
  });

  auto f = std::make_shared<FgdOptions>();
  auto* fgd_cmd = eval->add_subcommand("fgd", "Frechet gesture distance");
  fgd_cmd->add_option("--real", f->real, "Real latent features CSV (row = sample)")->check(CLI::ExistingFile);
  fgd_cmd->add_option("--gen", f->gen, "Generated latent features CSV")->check(CLI::ExistingFile);
  fgd_cmd->add_option("--real-bvh", f->real_bvh, "Real BVH clips for the built-in window/PCA features")
      ->check(CLI::ExistingFile);
  fgd_cmd->add_option("--gen-bvh", f->gen_bvh, "Generated BVH clips")->check(CLI::ExistingFile);
  fgd_cmd->add_option("--window", f->window, "Frames per window")->capture_default_str();
  fgd_cmd->add_option("--stride", f->stride, "Frames between windows")->capture_default_str();
  fgd_cmd->add_option("--dims", f->dims, "PCA dimensions")->capture_default_str();
  fgd_cmd->add_option("--joints", f->joints, "Joint subset")
      ->check(CLI::IsMember({"body", "hands", "all"}))
      ->capture_default_str();
  fgd_cmd->callback([f, &action] {
    action = [f] {
      Json params;
      if (!f->real.empty() || !f->gen.empty()) {
        if (f->real.empty() || f->gen.empty()) throw std::invalid_argument("fgd needs both --real and --gen");
        const Eigen::MatrixXd real = load_matrix(f->real);
        const Eigen::MatrixXd gen = load_matrix(f->gen);
        params["features"] = "csv";
        params["n_real"] = real.rows();
        emit(report("fgd", fgd(real, gen), params, static_cast<std::size_t>(gen.rows())));
        return 0;
      }
      if (f->real_bvh.empty() || f->gen_bvh.empty()) {
        throw std::invalid_argument("fgd needs --real/--gen feature CSVs or --real-bvh/--gen-bvh clips");
      }
      auto windows = [&](const std::vector<std::string>& paths) {
        std::vector<Eigen::MatrixXd> parts;
        Eigen::Index rows = 0, cols = -1;
        for (const auto& p : paths) {
          parts.push_back(motion_windows(load_positions(p, f->joints), f->window, f->stride));
          if (cols >= 0 && parts.back().cols() != cols) throw DataMismatch("clips have different joint counts");
          cols = parts.back().cols();
          rows += parts.back().rows();
        }
        Eigen::MatrixXd all(rows, cols);
        Eigen::Index at = 0;
        for (const auto& m : parts) {
          all.middleRows(at, m.rows()) = m;
          at += m.rows();
        }
        return all;
      };
      const Eigen::MatrixXd real = windows(f->real_bvh);
      const Eigen::MatrixXd gen = windows(f->gen_bvh);
      const WindowPca pca(real, f->dims);
      params["features"] = "window_pca";
      params["window"] = f->window;
      params["stride"] = f->stride;
      params["dims"] = pca.dims();
      params["joints"] = f->joints;
      params["n_real"] = real.rows();
      emit(report("fgd", fgd(pca.project(real), pca.project(gen)), params, static_cast<std::size_t>(gen.rows())));
      return 0;
    };
  });

  auto b = std::make_shared<BeatAlignOptions>();
  auto* ba_cmd = eval->add_subcommand("beatalign", "Gesture/audio beat alignment");
  ba_cmd->add_option("--gesture", b->gesture, "Gesture beat CSV")->required()->check(CLI::ExistingFile);
  ba_cmd->add_option("--audio", b->audio, "Audio beat CSV")->required()->check(CLI::ExistingFile);
  ba_cmd->add_option("--sigma", b->sigma, "Gaussian bandwidth in seconds")->capture_default_str();
  ba_cmd->callback([b, &action] {
    action = [b] {
      const BeatSequence gesture = with_file(b->gesture, [&] { return parse_beats_csv(read_text_file(b->gesture)); });
      const BeatSequence audio = with_file(b->audio, [&] { return parse_beats_csv(read_text_file(b->audio)); });
      Json params;
      params["sigma"] = report_number(b->sigma);
      params["n_audio"] = audio.times.size();
      emit(report("beatalign", beat_align(gesture, audio, b->sigma), params, gesture.times.size()));
      return 0;
    };
  });

  auto l = std::make_shared<L1Options>();
  auto* l1_cmd = eval->add_subcommand("l1div", "L1 diversity across clips");
  l1_cmd->add_option("--bvh", l->bvh, "BVH clips (joint positions, centre-cropped to the shortest)")
      ->check(CLI::ExistingFile);
  l1_cmd->add_option("--features", l->features, "CSV with one flattened clip per row")->check(CLI::ExistingFile);
  l1_cmd->add_option("--joints", l->joints, "Joint subset")
      ->check(CLI::IsMember({"body", "hands", "all"}))
      ->capture_default_str();
  l1_cmd->callback([l, &action] {
    action = [l] {
      Eigen::MatrixXd clips;
      Json params;
      if (!l->features.empty()) {
        clips = load_matrix(l->features);
        params["features"] = "csv";
      } else {
        std::vector<PositionTrack> tracks;
        for (const auto& p : l->bvh) tracks.push_back(load_positions(p, l->joints));
        clips = flatten_clips(tracks);
        params["features"] = "positions";
        params["joints"] = l->joints;
      }
      emit(report("l1div", l1_diversity(clips), params, static_cast<std::size_t>(clips.rows())));
      return 0;
    };
  });
}

}  // namespace beat::cli

#include "commands.h"
#include "common.h"

#include "beat/annotation.h"
#include "beat/bvh.h"
#include "beat/csv.h"
#include "beat/textgrid.h"

#include <cmath>
#include <iostream>
#include <memory>
#include <optional>

namespace beat::cli {

namespace fs = std::filesystem;

namespace {

struct AnnotateOptions {
  std::string annotation;
  std::string textgrid;
  std::vector<std::string> votes;
  std::string output;
  double fps = 30.0;
  std::optional<std::size_t> frames;
  bool inherit = false;
};

std::size_t default_frames(const AlignedTranscript& t, double fps) {
  return t.entries.empty() ? 0 : static_cast<std::size_t>(std::ceil(t.entries.back().end * fps - 1e-9));
}

std::string fixed(double value, int decimals) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
  return buffer;
}

}  // namespace

void register_annotate(CLI::App& app, Action& action) {
  auto o = std::make_shared<AnnotateOptions>();
  auto* cmd = app.add_subcommand("annotate", "Turn segment annotations into per-frame semantic scores");
  cmd->add_option("--annotation", o->annotation, "Segment file: start end score word:score ...")
      ->check(CLI::ExistingFile);
  cmd->add_option("--textgrid", o->textgrid, "Word alignment TextGrid")->check(CLI::ExistingFile);
  cmd->add_option("--average", o->votes, "Per-annotator binary vote CSVs to average instead")
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", o->output, "Score CSV (t,score); stdout when omitted");
  cmd->add_option("--fps", o->fps, "Frame rate")->capture_default_str();
  cmd->add_option("--frames", o->frames, "Frame count (default: end of the last word)");
  cmd->add_flag("--inherit-segment-score", o->inherit, "Give non-keyword frames the segment score");
  cmd->callback([o, &action] {
    action = [o] {
      ScoreTrack track;
      if (!o->votes.empty()) {
        std::vector<ScoreTrack> tracks;
        for (const auto& path : o->votes) {
          tracks.push_back(with_file(path, [&] { return parse_score_csv(read_text_file(path), o->fps); }));
        }
        track = average_annotators(tracks);
      } else {
        if (o->annotation.empty() || o->textgrid.empty()) {
          throw std::invalid_argument("annotate needs --annotation and --textgrid, or --average");
        }
        const auto segments =
            with_file(o->annotation, [&] { return parse_semantic_annotation(read_text_file(o->annotation)); });
        const auto transcript = with_file(o->textgrid, [&] { return parse_textgrid(read_text_file(o->textgrid)); });
        FrameScoreOptions options;
        options.inherit_segment_score = o->inherit;
        const FrameScores scores = frame_semantic_scores(segments, transcript, o->fps,
                                                         o->frames.value_or(default_frames(transcript, o->fps)), options);
        for (const auto& w : scores.warnings) std::cerr << "warning: " << w << '\n';
        track = scores.track;
      }
      if (o->output.empty()) {
        std::cout << scores_to_csv(track);
      } else {
        write_text_file(o->output, scores_to_csv(track));
      }
      return 0;
    };
  });
}

namespace {

struct StatsOptions {
  std::vector<std::string> scores;
  std::vector<std::string> textgrids;
  std::string agreement;
  std::string out_dir;
  double fps = 30.0;
};

int run_agreement(const StatsOptions& o) {
  const Eigen::MatrixXd table = with_file(o.agreement, [&] { return parse_matrix_csv(read_text_file(o.agreement)); });
  if (table.cols() != 2) throw ParseError(o.agreement + ": agreement table needs columns score,frames");
  std::vector<std::pair<double, double>> histogram;
  for (Eigen::Index r = 0; r < table.rows(); ++r) histogram.emplace_back(table(r, 0), table(r, 1));
  const AgreementTable result = semantic_agreement_table(histogram);
  if (!o.out_dir.empty()) {
    fs::create_directories(o.out_dir);
    write_text_file(fs::path(o.out_dir) / "agreement.csv", agreement_table_csv(result));
  }
  Json doc;
  doc["rows"] = Json::array();
  for (const auto& row : result.rows) {
    Json r;
    r["score"] = report_number(row.score);
    r["frames"] = report_number(row.frames);
    r["agreement"] = report_number(row.agreement);
    r["weighted"] = report_number(row.weighted);
    doc["rows"].push_back(r);
  }
  doc["average_with_zero"] = report_number(result.average_with_zero);
  doc["average_without_zero"] = report_number(result.average_without_zero);
  emit(doc);
  return 0;
}

int run_stats(const StatsOptions& o) {
  if (!o.agreement.empty()) return run_agreement(o);
  if (!o.textgrids.empty() && o.textgrids.size() != o.scores.size()) {
    throw DataMismatch("got " + std::to_string(o.scores.size()) + " score files but " +
                       std::to_string(o.textgrids.size()) + " TextGrids");
  }
  std::vector<ScoreTrack> tracks;
  std::vector<std::vector<std::string>> words;
  for (std::size_t k = 0; k < o.scores.size(); ++k) {
    const std::string& path = o.scores[k];
    tracks.push_back(with_file(path, [&] { return parse_score_csv(read_text_file(path), o.fps); }));
    if (o.textgrids.empty()) {
      words.emplace_back(tracks.back().scores.size(), kPadToken);
    } else {
      const std::string& tg = o.textgrids[k];
      const auto transcript = with_file(tg, [&] { return parse_textgrid(read_text_file(tg)); });
      const std::size_t expected = default_frames(transcript, o.fps);
      if (expected != tracks.back().scores.size()) {
        throw DataMismatch(path + " has " + std::to_string(tracks.back().scores.size()) + " frames but " + tg +
                           " spans " + std::to_string(expected));
      }
      words.push_back(frame_words(transcript, o.fps, expected));
    }
  }
  const SemanticStats stats = semantic_stats(tracks, words);
  if (!o.out_dir.empty()) {
    fs::create_directories(o.out_dir);
    write_text_file(fs::path(o.out_dir) / "histogram.csv", histogram_csv(stats));
    write_text_file(fs::path(o.out_dir) / "words.csv", word_table_csv(stats));
  }
  Json doc;
  doc["total_frames"] = stats.total_frames;
  doc["histogram"] = stats.histogram;
  doc["low_score_fraction"] = std::stod(fixed(stats.low_score_fraction, 3));
  doc["words"] = stats.words.size();
  emit(doc);
  std::cerr << "low-score fraction (<= 0.2): " << fixed(stats.low_score_fraction, 3) << '\n';
  return 0;
}

}  // namespace

void register_stats(CLI::App& app, Action& action) {
  auto o = std::make_shared<StatsOptions>();
  auto* cmd = app.add_subcommand("stats", "Semantic score histograms, per-word tables and agreement tables");
  cmd->add_option("--scores", o->scores, "Per-frame score CSVs")->check(CLI::ExistingFile);
  cmd->add_option("--textgrid", o->textgrids, "TextGrids aligned with --scores, in the same order")
      ->check(CLI::ExistingFile);
  cmd->add_option("--agreement", o->agreement, "CSV of score,frames rows for the agreement table")
      ->check(CLI::ExistingFile);
  cmd->add_option("--out-dir", o->out_dir, "Directory for the CSV tables");
  cmd->add_option("--fps", o->fps, "Frame rate")->capture_default_str();
  cmd->callback([o, &action] { action = [o] { return run_stats(*o); }; });
}

}  // namespace beat::cli

#pragma once

// Semantic-relevance and emotion annotations: parsing, frame-level score
// post-processing, inter-rater agreement and distribution statistics.

#include "beat/motion.h"

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace beat {

struct Keyword {
  std::string word;
  double score = 0.0;
};

struct SemanticSegment {
  double start = 0.0;
  double end = 0.0;
  double score = 0.0;  // mean of binary annotator votes
  std::vector<Keyword> keywords;
};

struct ScoreTrack {
  double fps = 30.0;
  std::vector<double> scores;
};

inline constexpr std::size_t kEmotionCount = 8;
const std::array<std::string, kEmotionCount>& emotion_names();

struct EmotionTrack {
  double fps = 30.0;
  std::vector<int> labels;  // ids in [0, 8)
};

// One record per non-empty line: "start end segment_score word:score ...".
// Lines starting with '#' are comments. Output is sorted by start time.
std::vector<SemanticSegment> parse_semantic_annotation(std::string_view text);
std::string write_semantic_annotation(const std::vector<SemanticSegment>& segments);

struct FrameScoreOptions {
  // Frames inside a segment but outside every keyword interval get the
  // segment score instead of 0.
  bool inherit_segment_score = false;
};

struct FrameScores {
  ScoreTrack track;
  std::vector<std::string> warnings;  // keywords that were not found in the transcript
};

// Frame i (midpoint (i + 0.5) / fps) inside a segment scores
// segment_score * keyword_score when the midpoint also lies in an aligned
// interval of one of that segment's keywords. Overlaps take the maximum.
FrameScores frame_semantic_scores(const std::vector<SemanticSegment>& segments,
                                  const AlignedTranscript& transcript, double fps,
                                  std::size_t frames, const FrameScoreOptions& options = {});

// Element-wise mean of binary annotator tracks.
ScoreTrack average_annotators(const std::vector<ScoreTrack>& tracks);

// Fraction of frames on which both annotators chose the same label.
double emotion_agreement(const EmotionTrack& a, const EmotionTrack& b);

struct AgreementRow {
  double score = 0.0;
  double frames = 0.0;
  double percentage = 0.0;
  double agreement = 0.0;
  double weighted = 0.0;  // frames * agreement
};

struct AgreementTable {
  std::vector<AgreementRow> rows;
  double average_with_zero = 0.0;
  double average_without_zero = 0.0;
};

// Agreement for a score s among binary annotators is max(s, 1 - s): the share
// of annotators on the majority side. Keys must be multiples of 0.1.
double semantic_agreement(double score);
AgreementTable semantic_agreement_table(const std::vector<std::pair<double, double>>& histogram);

struct WordScore {
  std::string word;
  double mean_score = 0.0;
  std::size_t frames = 0;
};

struct SemanticStats {
  std::array<std::size_t, 10> histogram{};  // [0,.1), [.1,.2), ..., [.9,1.0]
  std::size_t total_frames = 0;
  double low_score_fraction = 0.0;  // frames with score <= 0.2
  std::vector<WordScore> words;     // sorted by word
};

// Per-word means skip PAD frames. Each track must match its word sequence in length.
SemanticStats semantic_stats(const std::vector<ScoreTrack>& tracks,
                             const std::vector<std::vector<std::string>>& framed_words);

std::string histogram_csv(const SemanticStats& stats);
std::string word_table_csv(const SemanticStats& stats);
std::string agreement_table_csv(const AgreementTable& table);

}  // namespace beat

#include "beat/annotation.h"

#include "beat/bvh.h"
#include "beat/errors.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace beat {

const std::array<std::string, kEmotionCount>& emotion_names() {
  static const std::array<std::string, kEmotionCount> names = {
      "neutral", "anger", "happiness", "fear", "disgust", "sadness", "contempt", "surprise"};
  return names;
}

namespace {

double parse_field(std::string_view word, std::size_t line, const char* what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
  if (ec != std::errc() || ptr != word.data() + word.size() || !std::isfinite(value)) {
    throw ParseError(std::string("non-numeric ") + what + " '" + std::string(word) + "'", line);
  }
  return value;
}

void check_unit(double value, std::size_t line, const char* what) {
  if (value < 0.0 || value > 1.0) {
    throw ParseError(std::string(what) + " " + format_number(value, 6) + " outside [0,1]", line);
  }
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

std::vector<SemanticSegment> parse_semantic_annotation(std::string_view text) {
  std::vector<SemanticSegment> segments;
  std::istringstream in{std::string(text)};
  std::string line_text;
  std::size_t line = 0;
  while (std::getline(in, line_text)) {
    ++line;
    std::istringstream fields(line_text);
    std::vector<std::string> words;
    for (std::string w; fields >> w;) words.push_back(w);
    if (words.empty() || words.front().front() == '#') continue;
    if (words.size() < 3) throw ParseError("expected 'start end segment_score [word:score ...]'", line);

    SemanticSegment segment;
    segment.start = parse_field(words[0], line, "start");
    segment.end = parse_field(words[1], line, "end");
    segment.score = parse_field(words[2], line, "segment score");
    if (!(segment.end > segment.start)) throw ParseError("segment end <= start", line);
    check_unit(segment.score, line, "segment score");
    for (std::size_t k = 3; k < words.size(); ++k) {
      const auto colon = words[k].rfind(':');
      if (colon == std::string::npos || colon == 0) {
        throw ParseError("keyword '" + words[k] + "' is not word:score", line);
      }
      Keyword keyword;
      keyword.word = words[k].substr(0, colon);
      keyword.score = parse_field(std::string_view(words[k]).substr(colon + 1), line, "keyword score");
      check_unit(keyword.score, line, "keyword score");
      segment.keywords.push_back(std::move(keyword));
    }
    segments.push_back(std::move(segment));
  }
  std::stable_sort(segments.begin(), segments.end(),
                   [](const SemanticSegment& a, const SemanticSegment& b) { return a.start < b.start; });
  return segments;
}

std::string write_semantic_annotation(const std::vector<SemanticSegment>& segments) {
  std::ostringstream out;
  for (const auto& s : segments) {
    out << format_number(s.start, 17) << ' ' << format_number(s.end, 17) << ' '
        << format_number(s.score, 17);
    for (const auto& k : s.keywords) out << ' ' << k.word << ':' << format_number(k.score, 17);
    out << '\n';
  }
  return out.str();
}

FrameScores frame_semantic_scores(const std::vector<SemanticSegment>& segments,
                                  const AlignedTranscript& transcript, double fps,
                                  std::size_t frames, const FrameScoreOptions& options) {
  if (!(fps > 0.0)) throw std::invalid_argument("fps must be positive");
  FrameScores result;
  result.track.fps = fps;
  result.track.scores.assign(frames, 0.0);

  struct Span {
    double start, end, score;
  };
  for (const auto& segment : segments) {
    std::vector<Span> spans;
    for (const auto& keyword : segment.keywords) {
      const std::string key = lower(keyword.word);
      bool found = false;
      for (const auto& entry : transcript.entries) {
        if (entry.start < segment.end && entry.end > segment.start && lower(entry.token) == key) {
          spans.push_back({std::max(entry.start, segment.start), std::min(entry.end, segment.end),
                           segment.score * keyword.score});
          found = true;
        }
      }
      if (!found) {
        result.warnings.push_back("keyword '" + keyword.word + "' not aligned within [" +
                                  format_number(segment.start, 6) + ", " +
                                  format_number(segment.end, 6) + "); ignored");
      }
    }
    for (std::size_t i = 0; i < frames; ++i) {
      const double t = (static_cast<double>(i) + 0.5) / fps;
      if (t < segment.start || t >= segment.end) continue;
      double score = options.inherit_segment_score ? segment.score : 0.0;
      for (const Span& span : spans) {
        if (t >= span.start && t < span.end) score = std::max(score, span.score);
      }
      result.track.scores[i] = std::max(result.track.scores[i], score);
    }
  }
  return result;
}

ScoreTrack average_annotators(const std::vector<ScoreTrack>& tracks) {
  if (tracks.empty()) throw DataMismatch("no annotator tracks");
  ScoreTrack out;
  out.fps = tracks.front().fps;
  const std::size_t n = tracks.front().scores.size();
  out.scores.assign(n, 0.0);
  for (const auto& track : tracks) {
    if (track.scores.size() != n) throw DataMismatch("annotator tracks differ in length");
    for (std::size_t i = 0; i < n; ++i) {
      const double v = track.scores[i];
      if (v != 0.0 && v != 1.0) throw DataMismatch("annotator votes must be 0 or 1");
      out.scores[i] += v;
    }
  }
  for (double& v : out.scores) v /= static_cast<double>(tracks.size());
  return out;
}

double emotion_agreement(const EmotionTrack& a, const EmotionTrack& b) {
  if (a.labels.size() != b.labels.size()) throw DataMismatch("emotion tracks differ in length");
  if (a.labels.empty()) throw DataMismatch("emotion tracks are empty");
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.labels.size(); ++i) {
    for (int label : {a.labels[i], b.labels[i]}) {
      if (label < 0 || label >= static_cast<int>(kEmotionCount)) {
        throw DataMismatch("emotion id " + std::to_string(label) + " out of range");
      }
    }
    if (a.labels[i] == b.labels[i]) ++same;
  }
  return static_cast<double>(same) / static_cast<double>(a.labels.size());
}

double semantic_agreement(double score) { return std::max(score, 1.0 - score); }

AgreementTable semantic_agreement_table(const std::vector<std::pair<double, double>>& histogram) {
  AgreementTable table;
  std::map<long, double> by_tenth;
  for (const auto& [score, frames] : histogram) {
    const double tenths = score * 10.0;
    const long key = std::lround(tenths);
    if (std::abs(tenths - static_cast<double>(key)) > 1e-6 || key < 0 || key > 10) {
      throw DataMismatch("score " + format_number(score, 6) + " is not a multiple of 0.1 in [0,1]");
    }
    if (frames < 0.0) throw DataMismatch("negative frame count");
    by_tenth[key] += frames;
  }
  double total = 0.0;
  double total_nonzero = 0.0;
  double weighted = 0.0;
  double weighted_nonzero = 0.0;
  for (const auto& [key, frames] : by_tenth) {
    total += frames;
    if (key != 0) total_nonzero += frames;
  }
  for (const auto& [key, frames] : by_tenth) {
    AgreementRow row;
    row.score = static_cast<double>(key) / 10.0;
    row.frames = frames;
    row.percentage = total > 0.0 ? frames / total : 0.0;
    row.agreement = semantic_agreement(row.score);
    row.weighted = frames * row.agreement;
    weighted += row.weighted;
    if (key != 0) weighted_nonzero += row.weighted;
    table.rows.push_back(row);
  }
  table.average_with_zero = total > 0.0 ? weighted / total : 0.0;
  table.average_without_zero = total_nonzero > 0.0 ? weighted_nonzero / total_nonzero : 0.0;
  return table;
}

SemanticStats semantic_stats(const std::vector<ScoreTrack>& tracks,
                             const std::vector<std::vector<std::string>>& framed_words) {
  if (tracks.size() != framed_words.size()) {
    throw DataMismatch("score tracks and word sequences differ in count");
  }
  SemanticStats stats;
  std::map<std::string, std::pair<double, std::size_t>> per_word;
  std::size_t low = 0;
  for (std::size_t k = 0; k < tracks.size(); ++k) {
    const auto& scores = tracks[k].scores;
    if (scores.size() != framed_words[k].size()) {
      throw DataMismatch("track " + std::to_string(k) + " has " + std::to_string(scores.size()) +
                         " frames but its word sequence has " +
                         std::to_string(framed_words[k].size()));
    }
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const double s = scores[i];
      const auto bucket =
          std::min<std::size_t>(9, static_cast<std::size_t>(std::max(0.0, std::floor(s * 10.0 + 1e-9))));
      ++stats.histogram[bucket];
      if (s <= 0.2 + 1e-9) ++low;
      const std::string& word = framed_words[k][i];
      if (word != kPadToken) {
        auto& acc = per_word[word];
        acc.first += s;
        ++acc.second;
      }
    }
    stats.total_frames += scores.size();
  }
  stats.low_score_fraction =
      stats.total_frames ? static_cast<double>(low) / static_cast<double>(stats.total_frames) : 0.0;
  for (const auto& [word, acc] : per_word) {
    stats.words.push_back({word, acc.first / static_cast<double>(acc.second), acc.second});
  }
  return stats;
}

std::string histogram_csv(const SemanticStats& stats) {
  std::ostringstream out;
  out << "bucket_start,bucket_end,n_frames,fraction\n";
  for (std::size_t b = 0; b < stats.histogram.size(); ++b) {
    const double fraction = stats.total_frames
                                ? static_cast<double>(stats.histogram[b]) / static_cast<double>(stats.total_frames)
                                : 0.0;
    out << format_number(0.1 * static_cast<double>(b), 6) << ','
        << format_number(0.1 * static_cast<double>(b + 1), 6) << ',' << stats.histogram[b] << ','
        << format_number(fraction, 6) << '\n';
  }
  return out.str();
}

std::string word_table_csv(const SemanticStats& stats) {
  std::ostringstream out;
  out << "word,mean_score,n_frames\n";
  for (const auto& w : stats.words) {
    out << w.word << ',' << format_number(w.mean_score, 6) << ',' << w.frames << '\n';
  }
  return out.str();
}

std::string agreement_table_csv(const AgreementTable& table) {
  std::ostringstream out;
  out << "score,n_frames,percentage,agreement,weighted\n";
  for (const auto& r : table.rows) {
    out << format_number(r.score, 6) << ',' << format_number(r.frames, 6) << ','
        << format_number(r.percentage, 6) << ',' << format_number(r.agreement, 6) << ','
        << format_number(r.weighted, 6) << '\n';
  }
  return out.str();
}

}  // namespace beat

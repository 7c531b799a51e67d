#include "beat/textgrid.h"

#include "beat/bvh.h"
#include "beat/errors.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <variant>

namespace beat {

namespace {

struct Value {
  enum class Kind { Number, Text, Flag } kind;
  double number = 0.0;
  std::string text;
  std::size_t line = 0;
};

// Reduces both TextGrid layouts to the same stream of values: labels
// ("xmin =", "intervals:") and bracketed indices ("item [1]:") are dropped.
std::vector<Value> scan(std::string_view s) {
  std::vector<Value> values;
  std::size_t line = 1;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '"') {
      std::string text;
      const std::size_t start_line = line;
      ++i;
      while (true) {
        if (i >= s.size()) throw ParseError("unterminated string", start_line);
        if (s[i] == '"') {
          if (i + 1 < s.size() && s[i + 1] == '"') {
            text += '"';
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        if (s[i] == '\n') ++line;
        text += s[i++];
      }
      values.push_back({Value::Kind::Text, 0.0, std::move(text), start_line});
    } else if (c == '[') {
      while (i < s.size() && s[i] != ']') ++i;
      ++i;
    } else if (c == '!') {  // comment to end of line
      while (i < s.size() && s[i] != '\n') ++i;
    } else {
      std::size_t j = i;
      while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != '"' &&
             s[j] != '[') {
        ++j;
      }
      const std::string_view word = s.substr(i, j - i);
      if (word == "<exists>" || word == "<absent>") {
        values.push_back({Value::Kind::Flag, 0.0, std::string(word), line});
      } else {
        double number = 0.0;
        const auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), number);
        if (ec == std::errc() && ptr == word.data() + word.size()) {
          values.push_back({Value::Kind::Number, number, {}, line});
        }
      }
      i = j;
    }
  }
  return values;
}

class Reader {
 public:
  explicit Reader(std::vector<Value> values) : values_(std::move(values)) {}

  const Value& next() {
    if (pos_ >= values_.size()) {
      throw ParseError("unexpected end of TextGrid", values_.empty() ? 1 : values_.back().line);
    }
    return values_[pos_++];
  }
  double number() {
    const Value& v = next();
    if (v.kind != Value::Kind::Number) throw ParseError("expected a number", v.line);
    return v.number;
  }
  std::string text() {
    const Value& v = next();
    if (v.kind != Value::Kind::Text) throw ParseError("expected a quoted string", v.line);
    return v.text;
  }
  std::size_t count() {
    const Value& v = next();
    if (v.kind != Value::Kind::Number || v.number < 0 || v.number != std::floor(v.number)) {
      throw ParseError("expected a count", v.line);
    }
    return static_cast<std::size_t>(v.number);
  }
  std::size_t line() const {
    return pos_ < values_.size() ? values_[pos_].line : (values_.empty() ? 1 : values_.back().line);
  }
  bool done() const { return pos_ >= values_.size(); }

 private:
  std::vector<Value> values_;
  std::size_t pos_ = 0;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

struct Interval {
  double start, end;
  std::string text;
  std::size_t line;
};

}  // namespace

AlignedTranscript parse_textgrid(std::string_view text) {
  Reader in(scan(text));
  if (in.text() != "ooTextFile") throw ParseError("not a Praat text file", 1);
  if (in.text() != "TextGrid") throw ParseError("object class is not TextGrid", 1);
  in.number();  // xmin
  in.number();  // xmax
  const Value& tiers_flag = in.next();
  if (tiers_flag.kind != Value::Kind::Flag || tiers_flag.text != "<exists>") {
    throw ParseError("TextGrid has no tiers", tiers_flag.line);
  }
  const std::size_t tier_count = in.count();

  std::optional<std::vector<Interval>> chosen;
  bool chosen_by_name = false;
  for (std::size_t tier = 0; tier < tier_count; ++tier) {
    const std::string tier_class = in.text();
    const std::string name = in.text();
    in.number();
    in.number();
    const std::size_t n = in.count();
    if (tier_class == "IntervalTier") {
      std::vector<Interval> intervals;
      intervals.reserve(n);
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t line = in.line();
        const double a = in.number();
        const double b = in.number();
        intervals.push_back({a, b, in.text(), line});
      }
      const bool named_words = lower(name) == "words";
      if ((named_words && !chosen_by_name) || !chosen) {
        chosen = std::move(intervals);
        chosen_by_name = named_words;
      }
    } else if (tier_class == "TextTier") {
      for (std::size_t k = 0; k < n; ++k) {
        in.number();
        in.text();
      }
    } else {
      throw ParseError("unknown tier class '" + tier_class + "'", in.line());
    }
  }
  if (!chosen) throw ParseError("no word tier (interval tier) in TextGrid", in.line());

  AlignedTranscript transcript;
  const auto& intervals = *chosen;
  for (std::size_t k = 0; k < intervals.size(); ++k) {
    const Interval& iv = intervals[k];
    if (!(iv.start < iv.end)) {
      throw ParseError("interval " + std::to_string(k + 1) + " has end <= start", iv.line);
    }
    if (k > 0) {
      const Interval& prev = intervals[k - 1];
      if (iv.start < prev.start) {
        throw ParseError("intervals " + std::to_string(k) + " and " + std::to_string(k + 1) +
                             " are not sorted by start time",
                         iv.line);
      }
      if (iv.start < prev.end) {
        throw ParseError("intervals " + std::to_string(k) + " and " + std::to_string(k + 1) + " overlap",
                         iv.line);
      }
    }
    transcript.entries.push_back({blank(iv.text) ? kPadToken : iv.text, iv.start, iv.end});
  }
  return transcript;
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string write_textgrid(const AlignedTranscript& transcript) {
  validate_transcript(transcript);
  const double xmin = transcript.entries.empty() ? 0.0 : std::min(0.0, transcript.entries.front().start);
  const double xmax = transcript.entries.empty() ? 0.0 : transcript.entries.back().end;
  std::ostringstream out;
  out << "File type = \"ooTextFile\"\nObject class = \"TextGrid\"\n\n";
  out << "xmin = " << format_number(xmin, 17) << "\nxmax = " << format_number(xmax, 17) << '\n';
  out << "tiers? <exists>\nsize = 1\nitem []:\n";
  out << "    item [1]:\n        class = \"IntervalTier\"\n        name = \"words\"\n";
  out << "        xmin = " << format_number(xmin, 17) << "\n        xmax = " << format_number(xmax, 17) << '\n';
  out << "        intervals: size = " << transcript.entries.size() << '\n';
  for (std::size_t k = 0; k < transcript.entries.size(); ++k) {
    const AlignedWord& w = transcript.entries[k];
    out << "        intervals [" << k + 1 << "]:\n";
    out << "            xmin = " << format_number(w.start, 17) << '\n';
    out << "            xmax = " << format_number(w.end, 17) << '\n';
    out << "            text = " << quote(w.token == kPadToken ? std::string() : w.token) << '\n';
  }
  return out.str();
}

void validate_transcript(const AlignedTranscript& transcript) {
  const auto& e = transcript.entries;
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (!(e[k].start < e[k].end)) {
      throw DataMismatch("transcript entry " + std::to_string(k) + " has end <= start");
    }
    if (k > 0 && e[k].start < e[k - 1].end) {
      throw DataMismatch("transcript entries " + std::to_string(k - 1) + " and " + std::to_string(k) +
                         " overlap or are unsorted");
    }
  }
}

std::vector<std::string> frame_words(const AlignedTranscript& transcript, double fps,
                                     std::size_t frames) {
  if (!(fps > 0.0)) throw std::invalid_argument("fps must be positive");
  std::vector<std::string> out(frames, kPadToken);
  const auto& e = transcript.entries;
  for (std::size_t i = 0; i < frames; ++i) {
    const double t = (static_cast<double>(i) + 0.5) / fps;
    // first entry with end > t
    const auto it = std::upper_bound(e.begin(), e.end(), t,
                                     [](double time, const AlignedWord& w) { return time < w.end; });
    if (it != e.end() && it->start <= t) out[i] = it->token;
  }
  return out;
}

}  // namespace beat

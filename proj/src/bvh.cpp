#include "beat/bvh.h"

#include "beat/errors.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace beat {

namespace {

struct Token {
  std::string_view text;
  std::size_t line;
};

class TokenStream {
 public:
  explicit TokenStream(std::string_view text) {
    std::size_t line = 1;
    std::size_t i = 0;
    while (i < text.size()) {
      const char c = text[i];
      if (c == '\n') {
        ++line;
        ++i;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        ++i;
      } else {
        std::size_t j = i;
        while (j < text.size() && text[j] != ' ' && text[j] != '\t' && text[j] != '\r' &&
               text[j] != '\n') {
          ++j;
        }
        tokens_.push_back({text.substr(i, j - i), line});
        i = j;
      }
    }
  }

  bool done() const { return pos_ >= tokens_.size(); }
  std::size_t line() const {
    if (tokens_.empty()) return 1;
    return done() ? tokens_.back().line : tokens_[pos_].line;
  }
  const Token& peek() const {
    if (done()) throw ParseError("unexpected end of document", line());
    return tokens_[pos_];
  }
  Token next() {
    const Token& t = peek();
    ++pos_;
    return t;
  }
  void expect(std::string_view word) {
    const Token t = next();
    if (t.text != word) {
      throw ParseError("expected '" + std::string(word) + "', found '" + std::string(t.text) + "'",
                       t.line);
    }
  }
  double number() {
    const Token t = next();
    return parse_number(t);
  }
  static double parse_number(const Token& t) {
    double value = 0.0;
    const char* first = t.text.data();
    const char* last = first + t.text.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
      throw ParseError("non-numeric value '" + std::string(t.text) + "'", t.line);
    }
    return value;
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

Eigen::Vector3d read_offset(TokenStream& in) {
  in.expect("OFFSET");
  Eigen::Vector3d v;
  for (int k = 0; k < 3; ++k) v[k] = in.number();
  return v;
}

void read_joint(TokenStream& in, Skeleton& skeleton, std::optional<std::size_t> parent) {
  const Token name = in.next();
  if (name.text == "{" || name.text == "}") throw ParseError("missing joint name", name.line);
  in.expect("{");
  Joint joint;
  joint.name = std::string(name.text);
  joint.parent = parent;
  joint.offset = read_offset(in);
  in.expect("CHANNELS");
  const Token count_token = in.next();
  const double count = TokenStream::parse_number(count_token);
  if (count < 0 || count > 6 || count != std::floor(count)) {
    throw ParseError("invalid channel count", count_token.line);
  }
  for (int k = 0; k < static_cast<int>(count); ++k) {
    const Token label = in.next();
    const auto channel = parse_channel(std::string(label.text));
    if (!channel) throw ParseError("unknown channel '" + std::string(label.text) + "'", label.line);
    joint.channels.push_back(*channel);
  }
  const std::size_t index = skeleton.size();
  skeleton.push_back(std::move(joint));

  while (true) {
    const Token t = in.next();
    if (t.text == "}") return;
    if (t.text == "JOINT") {
      read_joint(in, skeleton, index);
    } else if (t.text == "End") {
      in.expect("Site");
      in.expect("{");
      skeleton[index].end_site = read_offset(in);
      in.expect("}");
    } else if (t.text == "MOTION" || t.text == "ROOT") {
      throw ParseError("unbalanced braces in HIERARCHY", t.line);
    } else {
      throw ParseError("unexpected token '" + std::string(t.text) + "'", t.line);
    }
  }
}

}  // namespace

MotionClip parse_bvh(std::string_view text) {
  TokenStream in(text);
  in.expect("HIERARCHY");
  MotionClip clip;
  in.expect("ROOT");
  read_joint(in, clip.skeleton, std::nullopt);
  if (!in.done() && in.peek().text == "}") throw ParseError("unbalanced braces in HIERARCHY", in.line());
  if (!in.done() && in.peek().text == "ROOT") {
    throw ParseError("multiple ROOT joints are not supported", in.line());
  }
  try {
    validate_skeleton(clip.skeleton);
  } catch (const DataMismatch& e) {
    throw ParseError(e.what(), in.line());
  }

  in.expect("MOTION");
  in.expect("Frames:");
  const Token frames_token = in.next();
  const double frames = TokenStream::parse_number(frames_token);
  if (frames < 0 || frames != std::floor(frames)) {
    throw ParseError("invalid frame count", frames_token.line);
  }
  in.expect("Frame");
  in.expect("Time:");
  const Token time_token = in.next();
  const double frame_time = TokenStream::parse_number(time_token);
  if (frame_time <= 0) throw ParseError("Frame Time must be positive", time_token.line);
  clip.fps = std::round(1.0 / frame_time);
  if (clip.fps <= 0) throw ParseError("Frame Time too large", time_token.line);

  const std::size_t T = static_cast<std::size_t>(frames);
  const std::size_t C = channel_count(clip.skeleton);
  clip.frames.resize(static_cast<Eigen::Index>(T), static_cast<Eigen::Index>(C));
  // Rows are validated line by line so a short or long row names its own line.
  std::size_t row = 0;
  while (!in.done()) {
    if (row >= T) throw ParseError("more frame rows than declared (" + std::to_string(T) + ")", in.line());
    const std::size_t line = in.peek().line;
    std::size_t column = 0;
    while (!in.done() && in.peek().line == line) {
      const Token t = in.next();
      if (column >= C) {
        throw ParseError("frame row has more than " + std::to_string(C) + " channels", line);
      }
      clip.frames(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(column)) =
          TokenStream::parse_number(t);
      ++column;
    }
    if (column != C) {
      throw ParseError("frame row has " + std::to_string(column) + " values, header declares " +
                           std::to_string(C) + " channels",
                       line);
    }
    ++row;
  }
  if (row != T) {
    throw ParseError("declared " + std::to_string(T) + " frames but found " + std::to_string(row),
                     in.line());
  }
  return clip;
}

std::string format_number(double value, int significant_digits) {
  if (value == 0.0) return "0";  // avoids "-0"
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*g", significant_digits, value);
  return buffer;
}

namespace {

void write_offset(std::ostringstream& out, const std::string& indent, const Eigen::Vector3d& v) {
  out << indent << "OFFSET " << format_number(v.x()) << ' ' << format_number(v.y()) << ' '
      << format_number(v.z()) << '\n';
}

void write_joint(std::ostringstream& out, const Skeleton& skeleton, std::size_t index,
                 int depth) {
  const Joint& joint = skeleton[index];
  const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
  out << indent << (joint.parent ? "JOINT " : "ROOT ") << joint.name << '\n';
  out << indent << "{\n";
  write_offset(out, indent + "  ", joint.offset);
  out << indent << "  CHANNELS " << joint.channels.size();
  for (Channel c : joint.channels) out << ' ' << channel_name(c);
  out << '\n';
  for (std::size_t child = index + 1; child < skeleton.size(); ++child) {
    if (skeleton[child].parent == index) write_joint(out, skeleton, child, depth + 1);
  }
  if (joint.end_site) {
    out << indent << "  End Site\n" << indent << "  {\n";
    write_offset(out, indent + "    ", *joint.end_site);
    out << indent << "  }\n";
  }
  out << indent << "}\n";
}

}  // namespace

std::string write_bvh(const MotionClip& clip) {
  validate_skeleton(clip.skeleton);
  if (clip.frames.cols() != static_cast<Eigen::Index>(channel_count(clip.skeleton))) {
    throw DataMismatch("frame width does not match skeleton channel count");
  }
  // Depth-first emission reorders joints unless the input already is in
  // depth-first order, which parse_bvh guarantees. Anything else is rejected
  // so joint order is always preserved.
  std::vector<std::size_t> order;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    const std::size_t j = stack.back();
    stack.pop_back();
    order.push_back(j);
    for (std::size_t child = clip.skeleton.size(); child-- > j + 1;) {
      if (clip.skeleton[child].parent == j) stack.push_back(child);
    }
  }
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (order[k] != k) throw DataMismatch("skeleton is not in depth-first order");
  }

  std::ostringstream out;
  out << "HIERARCHY\n";
  write_joint(out, clip.skeleton, 0, 0);
  out << "MOTION\n";
  out << "Frames: " << clip.frames.rows() << '\n';
  out << "Frame Time: " << format_number(1.0 / clip.fps) << '\n';
  for (Eigen::Index t = 0; t < clip.frames.rows(); ++t) {
    for (Eigen::Index c = 0; c < clip.frames.cols(); ++c) {
      if (c) out << ' ';
      out << format_number(clip.frames(t, c));
    }
    out << '\n';
  }
  return out.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

MotionClip read_bvh_file(const std::filesystem::path& path) {
  return parse_bvh(read_text_file(path));
}

void write_bvh_file(const std::filesystem::path& path, const MotionClip& clip) {
  write_text_file(path, write_bvh(clip));
}

}  // namespace beat

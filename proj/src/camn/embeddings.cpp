#include "beat/camn/embeddings.h"

#include "beat/bvh.h"
#include "beat/errors.h"
#include "beat/motion.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace beat::camn {

namespace {

std::string lower(std::string_view word) {
  std::string out(word);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

void WordTable::insert(std::string word, const std::vector<double>& values) {
  word = lower(word);
  if (index_.count(word)) return;  // first occurrence wins
  index_[word] = words_.size();
  words_.push_back(std::move(word));
  data_.insert(data_.end(), values.begin(), values.end());
}

WordTable WordTable::parse_vec(std::string_view text, std::size_t max_words) {
  WordTable table;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const auto fields = split_ws(line);
    if (fields.empty()) continue;
    if (line_no == 1 && fields.size() == 2) {
      std::size_t a = 0;
      const auto r = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), a);
      if (r.ec == std::errc()) continue;  // "count dim" header
    }
    if (fields.size() < 2) throw ParseError("embedding line has no values", line_no);
    std::vector<double> values;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(fields[i].data(), fields[i].data() + fields[i].size(), v);
      if (ec != std::errc() || ptr != fields[i].data() + fields[i].size()) {
        throw ParseError("non-numeric embedding value '" + std::string(fields[i]) + "'", line_no);
      }
      values.push_back(v);
    }
    if (table.dim_ == 0) table.dim_ = values.size();
    if (values.size() != table.dim_) {
      throw ParseError("embedding has " + std::to_string(values.size()) + " values, expected " +
                           std::to_string(table.dim_),
                       line_no);
    }
    table.insert(std::string(fields[0]), values);
    if (max_words != 0 && table.size() >= max_words) break;
  }
  if (table.dim_ == 0) throw ParseError("embedding file holds no vectors");
  return table;
}

WordTable WordTable::load_vec(const std::filesystem::path& path, std::size_t max_words) {
  return parse_vec(read_text_file(path), max_words);
}

WordTable WordTable::random(const std::vector<std::string>& words, std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw std::invalid_argument("embedding dimension must be positive");
  WordTable table;
  table.dim_ = dim;
  ndiff::Rng rng(seed);
  std::vector<double> values(dim);
  for (const auto& w : words) {
    if (w == kPadToken) continue;
    for (double& v : values) v = rng.normal();
    table.insert(w, values);
  }
  return table;
}

std::optional<std::size_t> WordTable::find(std::string_view word) const {
  const auto it = index_.find(lower(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<double> WordTable::vector(std::string_view word) const {
  std::vector<double> out(dim_, 0.0);
  if (word == kPadToken) return out;
  if (const auto id = find(word)) {
    std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(*id * dim_), dim_, out.begin());
  }
  return out;
}

ndiff::Tensor WordTable::embed(const std::vector<std::string>& frame_words) const {
  ndiff::Tensor out({frame_words.size(), dim_});
  for (std::size_t t = 0; t < frame_words.size(); ++t) {
    const auto v = vector(frame_words[t]);
    std::copy(v.begin(), v.end(), out.data().begin() + static_cast<std::ptrdiff_t>(t * dim_));
  }
  return out;
}

}  // namespace beat::camn

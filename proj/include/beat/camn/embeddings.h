#pragma once

#include "beat/ndiff/tensor.h"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace beat::camn {

// Word -> vector table. Lookups are case-insensitive; the pad token and
// unknown words map to the zero vector.
class WordTable {
 public:
  // fastText/word2vec text format: optional "count dim" header line, then
  // "word v1 ... vd" per line. Stops after max_words entries when non-zero.
  static WordTable parse_vec(std::string_view text, std::size_t max_words = 0);
  static WordTable load_vec(const std::filesystem::path& path, std::size_t max_words = 0);
  // Seeded standard-normal vectors for the given words.
  static WordTable random(const std::vector<std::string>& words, std::size_t dim, std::uint64_t seed);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  std::optional<std::size_t> find(std::string_view word) const;
  std::vector<double> vector(std::string_view word) const;

  // One row per frame word.
  ndiff::Tensor embed(const std::vector<std::string>& frame_words) const;

 private:
  void insert(std::string word, const std::vector<double>& values);

  std::size_t dim_ = 0;
  std::vector<std::string> words_;
  std::vector<double> data_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace beat::camn

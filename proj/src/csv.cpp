#include "beat/csv.h"

#include "beat/bvh.h"
#include "beat/errors.h"

#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

namespace beat {

namespace {

std::optional<std::vector<double>> parse_row(const std::string& line) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= line.size()) {
    std::size_t end = line.find(',', start);
    if (end == std::string::npos) end = line.size();
    std::string_view cell(line.data() + start, end - start);
    while (!cell.empty() && cell.front() == ' ') cell.remove_prefix(1);
    while (!cell.empty() && cell.back() == ' ') cell.remove_suffix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) return std::nullopt;
    values.push_back(v);
    start = end + 1;
  }
  return values;
}

std::vector<std::vector<double>> parse_rows(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto row = parse_row(line);
    if (!row) {
      if (number == 1) continue;  // header
      throw ParseError("non-numeric CSV row", number);
    }
    if (!rows.empty() && row->size() != rows.front().size()) {
      throw ParseError("CSV row has " + std::to_string(row->size()) + " columns, expected " +
                           std::to_string(rows.front().size()),
                       number);
    }
    rows.push_back(std::move(*row));
  }
  return rows;
}

}  // namespace

Eigen::MatrixXd parse_matrix_csv(std::string_view text) {
  const auto rows = parse_rows(text);
  if (rows.empty()) return {};
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

std::string matrix_to_csv(const Eigen::MatrixXd& m) {
  std::ostringstream out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_number(m(i, j), 17);
    }
    out << '\n';
  }
  return out.str();
}

ScoreTrack parse_score_csv(std::string_view text, double fps) {
  const auto rows = parse_rows(text);
  ScoreTrack track;
  track.fps = fps;
  for (const auto& row : rows) {
    if (row.size() != 1 && row.size() != 2) throw ParseError("score CSV needs 1 or 2 columns");
    const double s = row.back();
    if (s < 0.0 || s > 1.0) throw ParseError("score outside [0,1]");
    track.scores.push_back(s);
  }
  return track;
}

std::string scores_to_csv(const ScoreTrack& track) {
  std::ostringstream out;
  out << "t,score\n";
  for (std::size_t i = 0; i < track.scores.size(); ++i) {
    out << format_number(static_cast<double>(i) / track.fps, 6) << ',' << format_number(track.scores[i], 6)
        << '\n';
  }
  return out.str();
}

}  // namespace beat

#pragma once

#include "beat/annotation.h"

#include <Eigen/Core>

#include <string>
#include <string_view>

namespace beat {

// Numeric CSV, one sample per row. A first line that does not parse as
// numbers is treated as a header. Ragged rows are a ParseError.
Eigen::MatrixXd parse_matrix_csv(std::string_view text);
std::string matrix_to_csv(const Eigen::MatrixXd& m);

// Per-frame score track: either a single "score" column or "t,score".
ScoreTrack parse_score_csv(std::string_view text, double fps);
std::string scores_to_csv(const ScoreTrack& track);

}  // namespace beat

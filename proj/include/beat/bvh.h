#pragma once

#include "beat/motion.h"

#include <filesystem>
#include <string>
#include <string_view>

namespace beat {

// Parses a Biovision Hierarchy document. The skeleton keeps file order, which
// is depth-first and therefore topological. fps = round(1 / Frame Time).
// Throws beat::ParseError with the offending line number.
MotionClip parse_bvh(std::string_view text);

// Emits HIERARCHY then MOTION. Values use 9 significant digits.
std::string write_bvh(const MotionClip& clip);

MotionClip read_bvh_file(const std::filesystem::path& path);
void write_bvh_file(const std::filesystem::path& path, const MotionClip& clip);

// Helpers shared by the other text formats.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string format_number(double value, int significant_digits = 9);

}  // namespace beat

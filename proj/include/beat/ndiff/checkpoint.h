#pragma once

#include "beat/ndiff/tape.h"

#include <cstdint>
#include <filesystem>
#include <string>

namespace beat::ndiff {

// JSON manifest: {"seed": n, "params": [{"name", "shape", "values"}, ...]}.
std::string checkpoint_to_json(const ParameterSet& params, std::uint64_t seed);

// Overwrites values of matching parameters. Every parameter in the set must
// be present with the same shape; returns the recorded seed.
std::uint64_t load_checkpoint_json(const std::string& text, ParameterSet& params);

void save_checkpoint(const std::filesystem::path& path, const ParameterSet& params, std::uint64_t seed);
std::uint64_t load_checkpoint(const std::filesystem::path& path, ParameterSet& params);

}  // namespace beat::ndiff

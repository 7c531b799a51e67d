#pragma once

#include "beat/motion.h"

#include <CLI11.hpp>

#include <functional>
#include <vector>

namespace beat::cli {

// Set by the invoked subcommand's parse callback and run after parsing, so
// command-line errors and runtime errors map to separate exit codes.
using Action = std::function<int()>;

void register_convert(CLI::App& app, Action& action);
void register_beats(CLI::App& app, Action& action);
void register_annotate(CLI::App& app, Action& action);
void register_stats(CLI::App& app, Action& action);
void register_eval(CLI::App& app, Action& action);
void register_camn(CLI::App& app, Action& action);

PositionTrack select_positions(const PositionTrack& track, const std::vector<std::size_t>& joints);

}  // namespace beat::cli

#pragma once

#include "beat/errors.h"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <utility>

namespace beat::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,  // I/O and anything not covered below
  kParseError = 2,
  kDataMismatch = 3,
  kNumericError = 4,
};

// Rounds to 6 significant digits so reports are stable across platforms.
double report_number(double value);

// {metric, value, params, n}
Json report(const std::string& metric, double value, Json params, std::size_t n);

// Prints JSON to stdout with a trailing newline.
void emit(const Json& doc);

// Runs `fn` and re-raises parse errors prefixed with the file name.
template <class Fn>
auto with_file(const std::filesystem::path& path, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string lower_extension(const std::filesystem::path& path);

}  // namespace beat::cli

#pragma once
// Runs the command-line tool in a scratch directory that links the fixture
// directory as ./data, so every path in its output is relative and stable.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace beat::testing {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliSandbox {
 public:
  explicit CliSandbox(const std::string& name) {
    dir_ = std::filesystem::temp_directory_path() / ("beat_cli_" + name + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
    std::filesystem::create_directory_symlink(BEAT_TEST_DATA, dir_ / "data");
  }
  ~CliSandbox() {
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
  }
  CliSandbox(const CliSandbox&) = delete;
  CliSandbox& operator=(const CliSandbox&) = delete;

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path path(const std::string& rel) const { return dir_ / rel; }

  // `env` is a prefix of VAR=value assignments, may be empty.
  CliResult run(const std::string& args, const std::string& env = "") const {
    const std::string command = "cd '" + dir_.string() + "' && env -u BEAT_CONFIG " + env + " '" + BEAT_CLI + "' " +
                                args + " > .stdout 2> .stderr";
    const int status = std::system(command.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(dir_ / ".stdout");
    r.err = slurp(dir_ / ".stderr");
    return r;
  }

 private:
  std::filesystem::path dir_;
};

// Compares against tests/golden/<name>; BEAT_UPDATE_GOLDEN=1 rewrites it.
inline bool matches_golden(const std::string& name, const std::string& actual, std::string* expected_out = nullptr) {
  const std::filesystem::path p = std::filesystem::path(BEAT_GOLDEN) / name;
  if (const char* update = std::getenv("BEAT_UPDATE_GOLDEN"); update && std::string(update) == "1") {
    std::ofstream(p, std::ios::binary) << actual;
    return true;
  }
  const std::string expected = slurp(p);
  if (expected_out) *expected_out = expected;
  return std::filesystem::exists(p) && expected == actual;
}

// Drops the line holding `key` so run-specific fields can be compared.
inline std::string without_line(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line))
    if (line.find(key) == std::string::npos) out += line + "\n";
  return out;
}

}  // namespace beat::testing

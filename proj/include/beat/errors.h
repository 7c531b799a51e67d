#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace beat {

// Malformed input file. Carries the 1-based line number when one is known
// (0 otherwise) so callers can print file:line diagnostics.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line = 0);

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Inputs that are individually valid but do not fit together: ragged tracks,
// clip sets of different sizes, length mismatches.
class DataMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// NaN/Inf losses, materially non-symmetric matrices and similar.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace beat

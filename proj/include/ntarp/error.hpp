#pragma once

#include <stdexcept>
#include <string>

namespace ntarp {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument was violated (sizes, ranges, options).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// The projected values are all equal, so no binary split exists.
class DegenerateProjection : public Error {
 public:
  DegenerateProjection() : Error("unsplittable constant projection") {}
  explicit DegenerateProjection(const std::string& what) : Error(what) {}
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// Malformed input file; carries the 1-based row and column when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row = 0, std::size_t column = 0)
      : Error(what), row_(row), column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Log-log regression could not be formed (non-positive deviation, too few points).
class CalibrationError : public Error {
 public:
  using Error::Error;
};

}  // namespace ntarp

#ifndef ICORE_ERROR_HPP
#define ICORE_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace icore {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad model thresholds, dimension mismatches, malformed specs.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Carries the 1-based line number of the offending input row.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// The window is not I-bounded: {n : |x_n| > bound} is not small.
class UnboundedSequenceError : public Error {
 public:
  using Error::Error;
};

class SizeLimitError : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

}  // namespace icore

#endif  // ICORE_ERROR_HPP

#pragma once

#include <stdexcept>
#include <string>

namespace ildpc {

// File could not be parsed; carries the 1-based line number when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line = 0)
      : std::runtime_error(line > 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Parsed structure is internally inconsistent (e.g. declared vs listed nnz).
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Vector/matrix sizes do not agree.
class DimensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parameter is outside its documented domain.
class ParameterError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configuration is unusable as a whole (e.g. unstable integrator step).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File I/O failure distinct from parse problems.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ildpc

#pragma once

#include <stdexcept>
#include <string>

namespace eosim {

// Base of every library error. The CLI maps Error subclasses to exit code 1
// (domain / validation failures); IoError and ConfigError map to 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid physical or structural parameter (T + R > 1, non-square matrix, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

// Dangling or doubly used port in a connection map.
class WiringError : public Error {
 public:
  using Error::Error;
};

// |r_a r_b| >= 1 at a two-port junction.
class DivergentFeedbackError : public Error {
 public:
  using Error::Error;
};

// Internal-port system I - S_ii C is singular (lossless loop at unit gain).
class ResonantSingularityError : public Error {
 public:
  using Error::Error;
};

class AnalysisError : public Error {
 public:
  using Error::Error;
};

// Malformed data file (CSV input and the like); what() names the line.
class FormatError : public Error {
 public:
  using Error::Error;
};

struct SourceLoc {
  int line = 0;
  int column = 0;
};

inline std::string format_loc(SourceLoc loc) {
  return std::to_string(loc.line) + ":" + std::to_string(loc.column);
}

// Netlist syntax / semantic diagnostics. what() is "line:col: message".
class NetlistError : public Error {
 public:
  NetlistError(SourceLoc loc, const std::string& message)
      : Error(format_loc(loc) + ": " + message), loc_(loc), message_(message) {}

  SourceLoc loc() const { return loc_; }
  const std::string& message() const { return message_; }

 private:
  SourceLoc loc_;
  std::string message_;
};

}  // namespace eosim

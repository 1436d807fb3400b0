#pragma once

#include <stdexcept>
#include <string>

namespace ftsim {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TopologyError : public Error {
 public:
  using Error::Error;
};

class RoutingError : public Error {
 public:
  using Error::Error;
};

// Raised when a buffer would overflow or a credit counter leaves its range.
// Either case means the credit accounting is broken, so runs abort.
class FlowControlError : public Error {
 public:
  using Error::Error;
};

class TrafficError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(int line, const std::string& what)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  explicit ConfigError(const std::string& what) : ConfigError(0, what) {}

  int line() const { return line_; }

 private:
  int line_;
};

class SimulationError : public Error {
 public:
  using Error::Error;
};

}  // namespace ftsim

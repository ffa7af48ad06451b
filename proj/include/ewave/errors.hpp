#pragma once

#include <stdexcept>
#include <string>

namespace ewave {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Field handed to an operation in the wrong representation.
struct RepresentationError : Error {
  using Error::Error;
};

struct LatticeMismatch : Error {
  using Error::Error;
};

// Solver left the small-data regime.
struct BlowUpError : Error {
  BlowUpError(const std::string& what, double t, double max_u, double bound)
      : Error(what), time(t), max_abs_u(max_u), threshold(bound) {}
  double time;
  double max_abs_u;
  double threshold;
};

// Trajectory too short for the moment tail or for a rate fit.
struct InsufficientHorizon : Error {
  using Error::Error;
};

struct ConfigError : Error {
  ConfigError(const std::string& what, int line_no = 0)
      : Error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + what : what),
        line(line_no) {}
  int line;
};

}  // namespace ewave

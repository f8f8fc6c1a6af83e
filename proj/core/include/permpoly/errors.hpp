#pragma once

#include <stdexcept>
#include <string>

namespace permpoly {

// A construction's stated hypotheses do not hold for the given inputs.
// Callers can recover (redraw parameters, report to the user, ...).
struct hypothesis_error : std::runtime_error {
  explicit hypothesis_error(const std::string& msg) : std::runtime_error(msg) {}
};

// An internal cross-check failed.  This is always a bug in this library,
// never a user error, and is not meant to be caught in normal operation.
struct internal_error : std::logic_error {
  explicit internal_error(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace permpoly

#pragma once

#include <stdexcept>
#include <string>

namespace sdenet {

// Precondition violations on arguments (bad dimension, unknown name, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class OutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Malformed model/network/CSV documents. `location()` names the offending
// element (a JSON pointer-like path or a "line N" marker).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string location, const std::string& what)
      : std::runtime_error(location.empty() ? what : location + ": " + what),
        location_(std::move(location)) {}

  const std::string& location() const noexcept { return location_; }

 private:
  std::string location_;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double t_reached, double last_step)
      : std::runtime_error(what), t_reached_(t_reached), last_step_(last_step) {}

  double t_reached() const noexcept { return t_reached_; }
  double last_step() const noexcept { return last_step_; }

 private:
  double t_reached_;
  double last_step_;
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TrainingError : public std::runtime_error {
 public:
  TrainingError(const std::string& what, int epoch)
      : std::runtime_error(what + " (epoch " + std::to_string(epoch) + ")"), epoch_(epoch) {}

  int epoch() const noexcept { return epoch_; }

 private:
  int epoch_;
};

}  // namespace sdenet

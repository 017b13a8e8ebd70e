#pragma once

#include <stdexcept>
#include <string>

namespace graphadapt {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument (shape, range, bijectivity, ...) was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A random generator could not produce an admissible object within its attempt budget.
class GenerationFailure : public Error {
 public:
  using Error::Error;
};

/// Power iteration did not settle; carries the last eigenvalue estimate.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_estimate)
      : Error(what), last_estimate_(last_estimate) {}

  double last_estimate() const noexcept { return last_estimate_; }

 private:
  double last_estimate_;
};

/// The model configuration cannot run on the one-hop message-passing simulator.
class NotDistributable : public Error {
 public:
  NotDistributable(const std::string& what, int layer) : Error(what), layer_(layer) {}

  int layer() const noexcept { return layer_; }

 private:
  int layer_;
};

/// Checkpoint container is truncated, malformed or of an unsupported version.
class CheckpointError : public Error {
 public:
  using Error::Error;
};

/// Training diverged (non-finite loss).
class TrainingError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file (edge list, coordinates, ratings, station data, spec).
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace graphadapt

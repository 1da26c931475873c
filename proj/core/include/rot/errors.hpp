#pragma once

#include <stdexcept>
#include <string>

namespace rot {

// Malformed arguments: negative weights, p < 1, bad geometry, etc.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A PointId outside the metric pair's working set.
class OutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Two operands belong to different MetricPair instances.
class PairMismatch : public std::logic_error {
 public:
  PairMismatch() : std::logic_error("operands belong to different metric pairs") {}
};

// The solver failed to reach a certified optimum.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rot

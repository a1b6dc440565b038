#pragma once

#include <stdexcept>
#include <string>

namespace csrl {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidInputError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct AlignmentError : Error { using Error::Error; };
struct JointLimitError : Error { using Error::Error; };
struct UnreachablePoseError : Error { using Error::Error; };
struct NotReadyError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };

// Greedy rollout hit a collision or unreachable pose; carries the step index.
struct OptimizationFailedError : Error {
  int step;
  OptimizationFailedError(const std::string& msg, int step_index)
      : Error(msg), step(step_index) {}
};

}  // namespace csrl

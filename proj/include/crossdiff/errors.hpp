#pragma once

#include <stdexcept>
#include <string>

namespace crossdiff {

// Invalid or inconsistent run configuration; CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Base of all numerical failures; CLI maps these to exit code 3.
struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SingularSystem : SolverError {
  int pivot_index;
  SingularSystem(int pivot, const std::string& msg)
      : SolverError(msg), pivot_index(pivot) {}
};

struct FixedPointDivergence : SolverError {
  double last_update;
  int iterations;
  FixedPointDivergence(double last_update_, int iterations_, const std::string& msg)
      : SolverError(msg), last_update(last_update_), iterations(iterations_) {}
};

struct NoSteadyState : SolverError {
  long steps;
  double last_update;
  NoSteadyState(long steps_, double last_update_, const std::string& msg)
      : SolverError(msg), steps(steps_), last_update(last_update_) {}
};

}  // namespace crossdiff

#pragma once

#include <optional>

#include "crossdiff/regularization.hpp"

namespace crossdiff {

struct SolverParams {
  RegParam reg;
  double tau = 0.0;        // time step
  double tol = 0.0;        // fixed point stopping tolerance (max norm)
  double tol_s = 1e-8;     // stationarity tolerance on the first iterate update
  int max_fp_iters = 200;
  double delta0 = 0.5;     // safety margin of the step constraint omega tau <= 1 - delta0
  std::optional<double> t_end;

  void validate() const;
};

// Step count covering [0, t_end] with step tau; exact multiples stay exact.
long steps_for(double t_end, double tau);

}  // namespace crossdiff
